#pragma once

// Command-line front end: simulate, analyze, embed, serve.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wordease/feedback.hpp"
#include "wordease/phonetics.hpp"
#include "wordease/resources.hpp"
#include "wordease/service.hpp"
#include "wordease/simulator.hpp"
#include "wordease/tokenizer.hpp"

namespace wordease {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace cli {

struct SimulateArgs {
  std::string profiles = bundled_profiles_path().string();
  std::string corpus = bundled_corpus_path().string();
  std::string corpus_format = "text";
  std::string column = "transcript";
  std::string dict = bundled_dict_path().string();
  std::string thesaurus = bundled_thesaurus_path().string();
  std::string embedding_config;
  std::string scenario = "explicit";
  int interactions = 500;
  std::uint64_t seed = 42;
  double threshold = 0.1;
  double train_fraction = 0.75;
  bool oracle_consistent_substitute = false;
  std::string out = "results";
  bool svg = false;
};

inline EmbeddingConfig embedding_config_or_default(const std::string& path) {
  return path.empty() ? EmbeddingConfig{} : load_embedding_config(path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::MissingFile, "write failed for " + path.string());
}

inline int simulate(const SimulateArgs& a, std::ostream& out) {
  SimulationConfig config;
  config.scenario = parse_scenario(a.scenario);
  config.interactions = a.interactions;
  config.rng_seed = a.seed;
  config.implicit_highlight_threshold = a.threshold;
  config.train_fraction = a.train_fraction;
  config.oracle_consistent_substitute = a.oracle_consistent_substitute;
  config.validate();

  const auto profiles = load_profiles(a.profiles);
  const auto res = load_language_resources(a.dict, a.thesaurus, embedding_config_or_default(a.embedding_config));
  const auto format = a.corpus_format == "csv" ? CorpusFormat::Csv : CorpusFormat::PlainText;
  const auto corpus = load_corpus(a.corpus, *res.dict, format, a.column);

  std::vector<SimulationReport> reports;
  for (const auto& p : profiles) {
    reports.push_back(run_simulation(p, corpus, config, res.embedding, *res.dict, res.synonyms));
  }

  const std::filesystem::path dir = a.out;
  std::filesystem::create_directories(dir);
  for (const auto& r : reports) {
    std::ostringstream csv;
    write_report_csv(csv, {r});
    write_file(dir / (r.profile_id + ".csv"), csv.str());
    if (r.terminated_early_at) {
      out << r.profile_id << ": stopped after " << *r.terminated_early_at << " interactions (" << r.stop_reason
          << ")\n";
    }
  }
  const auto agg = aggregate(reports);
  std::ostringstream csv;
  write_aggregate_csv(csv, agg);
  write_file(dir / "aggregate.csv", csv.str());
  if (a.svg) {
    std::ostringstream svg;
    write_aggregate_svg(svg, agg);
    write_file(dir / "aggregate.svg", svg.str());
  }
  const auto& last = agg.rows.back();
  out << to_string(config.scenario) << ": " << reports.size() << " profiles, " << corpus.unique_words.size()
      << " corpus words; interaction " << last.interaction << " mean accuracy "
      << detail::fixed6(last.mean.accuracy) << ", f1 " << detail::fixed6(last.mean.f1) << '\n'
      << "wrote " << (dir / "aggregate.csv").string() << '\n';
  return kExitOk;
}

inline int analyze(const std::string& session_file, const std::string& text_file, const std::string& dict_path,
                   const std::string& embedding_config, std::ostream& out) {
  const auto text = read_file(text_file);
  const auto dict = load_pronouncing_dict(dict_path);
  const auto embedding = std::make_shared<const PhoneticEmbedding>(
      build_embedding(dict, embedding_config_or_default(embedding_config)));
  const auto [id, snap] = load_session_file(session_file, embedding);
  for (const auto& t : detect_immutable(tokenize(text))) {
    if (t.kind != TokenKind::Word) continue;
    const auto pred = predict_word(*snap.model, t.text);
    if (!pred.highlighted) continue;
    out << t.start << '\t' << t.text;
    if (pred.prob) out << '\t' << detail::fixed6(*pred.prob);
    out << '\n';
  }
  return kExitOk;
}

inline int embed(const std::string& dict_path, const std::string& word, std::size_t neighbors,
                 const std::string& embedding_config, std::ostream& out) {
  const auto dict = load_pronouncing_dict(dict_path);
  const auto seq = phonemes_of(dict, word);
  for (std::size_t i = 0; i < seq.phonemes.size(); ++i) out << (i ? " " : "") << seq.phonemes[i];
  out << '\n';
  if (neighbors == 0) return kExitOk;
  const auto embedding = build_embedding(dict, embedding_config_or_default(embedding_config));
  for (const auto& n : nearest_neighbors(embedding, word, neighbors)) {
    out << n.word << '\t' << detail::fixed6(n.similarity) << '\n';
  }
  return kExitOk;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"wordease: personalised pronunciation-difficulty highlighting"};
  app.require_subcommand(1);

  cli::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run simulated users and write learning-curve CSVs");
  simulate->add_option("--profiles", sim.profiles, "Profiles JSON")->capture_default_str();
  simulate->add_option("--corpus", sim.corpus, "Corpus (plain text or CSV)")->capture_default_str();
  simulate->add_option("--corpus-format", sim.corpus_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  simulate->add_option("--column", sim.column, "CSV column holding the text")->capture_default_str();
  simulate->add_option("--dict", sim.dict, "Pronouncing dictionary")->capture_default_str();
  simulate->add_option("--thesaurus", sim.thesaurus, "Thesaurus TSV")->capture_default_str();
  simulate->add_option("--embedding-config", sim.embedding_config, "Embedding config JSON");
  simulate->add_option("--scenario", sim.scenario, "explicit, implicit or random")
      ->check(CLI::IsMember({"explicit", "implicit", "random"}, CLI::ignore_case))
      ->capture_default_str();
  simulate->add_option("--interactions", sim.interactions, "Feedback interactions per profile")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Train/test split and sampling seed")->capture_default_str();
  simulate->add_option("--threshold", sim.threshold, "Highlight threshold in the implicit scenario")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--train-fraction", sim.train_fraction, "Share of corpus words used for training")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_flag("--oracle-consistent-substitute", sim.oracle_consistent_substitute,
                     "Implicit: pick the first alternative the simulated user finds easy");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_flag("--svg", sim.svg, "Also write aggregate.svg");

  std::string session_file, text_file, analyze_dict = bundled_dict_path().string(), analyze_embedding;
  auto* analyze = app.add_subcommand("analyze", "List the words a saved session would highlight");
  analyze->add_option("--session-file", session_file, "Session JSON written by the service")->required();
  analyze->add_option("--text", text_file, "Text file to analyze")->required();
  analyze->add_option("--dict", analyze_dict, "Pronouncing dictionary")->capture_default_str();
  analyze->add_option("--embedding-config", analyze_embedding, "Embedding config JSON");

  std::string embed_dict = bundled_dict_path().string(), embed_word, embed_embedding;
  std::size_t neighbors = 10;
  auto* embed = app.add_subcommand("embed", "Show a word's phonemes and phonetic neighbours");
  embed->add_option("--dict", embed_dict, "Pronouncing dictionary")->capture_default_str();
  embed->add_option("--word", embed_word, "Word to look up")->required();
  embed->add_option("--neighbors", neighbors, "Nearest neighbours to list (0 = phonemes only)")
      ->capture_default_str();
  embed->add_option("--embedding-config", embed_embedding, "Embedding config JSON");

  std::string config_path;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Service config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*simulate) return cli::simulate(sim, out);
    if (*analyze) return cli::analyze(session_file, text_file, analyze_dict, analyze_embedding, out);
    if (*embed) return cli::embed(embed_dict, embed_word, neighbors, embed_embedding, out);
    if (*serve) {
      ServiceConfig config = config_path.empty() ? ServiceConfig{} : load_service_config(config_path);
      apply_env_overrides(config);
      return run_server(config, err);
    }
  } catch (const Error& e) {
    err << "wordease: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidConfig ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "wordease: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace wordease
