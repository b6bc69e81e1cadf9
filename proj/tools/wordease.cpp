#include "wordease/cli.hpp"

int main(int argc, char** argv) { return wordease::run_cli(argc, argv); }
