// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "properties.hpp"
#include "support.hpp"
#include "wordease/cli.hpp"
#include "wordease/detail/csv.hpp"

using namespace wordease;
using wordease::testing::bundled;
using wordease::testing::TempDir;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) { return detail::fixed6(v); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs `wordease simulate` into `out` and returns the aggregate CSV rows
/// (header dropped).
std::vector<std::vector<std::string>> simulate(const std::filesystem::path& out, std::vector<std::string> extra) {
  std::vector<std::string> args = {"wordease", "simulate", "--out", out.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log, err;
  if (run_cli(static_cast<int>(argv.size()), argv.data(), log, err) != kExitOk) {
    throw std::runtime_error("simulate failed: " + err.str());
  }
  auto rows = detail::parse_csv(slurp(out / "aggregate.csv"));
  rows.erase(rows.begin());
  return rows;
}

double column(const std::vector<std::string>& row, const char* name) {
  static const auto header = detail::parse_csv(std::string(kAggregateCsvHeader))[0];
  const auto it = std::find(header.begin(), header.end(), name);
  return std::stod(row[static_cast<std::size_t>(it - header.begin())]);
}

struct Curves {
  std::map<std::string, std::vector<std::vector<std::string>>> by_name;
  const std::vector<std::vector<std::string>>& get(const std::string& name, const TempDir& dir,
                                                    std::vector<std::string> args) {
    auto it = by_name.find(name);
    if (it == by_name.end()) it = by_name.emplace(name, simulate(dir.path() / name, std::move(args))).first;
    return it->second;
  }
};

Outcome a1(Curves& c, const TempDir& dir) {
  const auto& rows = c.get("explicit50", dir, {"--scenario", "explicit", "--interactions", "50"});
  const double acc = column(rows.at(20), "accuracy");
  return {acc >= 0.78, "mean accuracy at interaction 20 = " + fmt(acc) + " (need >= 0.78)"};
}

Outcome a2(Curves& c, const TempDir& dir) {
  bool ok = true;
  std::string d;
  for (const std::string s : {"explicit", "implicit", "random"}) {
    const auto& rows = c.get(s + "200", dir, {"--scenario", s, "--interactions", "200"});
    const double first = column(rows.front(), "f1");
    const double last = column(rows.back(), "f1");
    ok = ok && last > first;
    d += s + " f1 " + fmt(first) + " -> " + fmt(last) + "; ";
  }
  return {ok, d};
}

Outcome a3(Curves& c, const TempDir& dir) {
  const auto f1 = [&](const std::string& s) {
    return column(c.get(s + "200", dir, {"--scenario", s, "--interactions", "200"}).back(), "f1");
  };
  const double e = f1("explicit"), i = f1("implicit"), r = f1("random");
  return {e > r && e >= i,
          "f1 at 200: explicit " + fmt(e) + ", implicit " + fmt(i) + ", random " + fmt(r) +
              " (need explicit > random, explicit >= implicit)"};
}

Outcome a4(Curves& c, const TempDir& dir) {
  const double low =
      column(c.get("implicit200", dir, {"--scenario", "implicit", "--interactions", "200"}).back(), "f1");
  const double high = column(
      c.get("implicit200_t07", dir, {"--scenario", "implicit", "--interactions", "200", "--threshold", "0.7"}).back(),
      "f1");
  return {low >= high, "implicit f1: threshold 0.1 " + fmt(low) + ", threshold 0.7 " + fmt(high)};
}

Outcome a5() {
  int correct = 0, total = 0;
  std::string issues;
  for (const auto& p : wordease::testing::bundled_profiles()) {
    const auto found = profile_issues(p, *bundled().dict);
    total += static_cast<int>(p.seed_easy.size() + p.seed_hard.size());
    correct += static_cast<int>(p.seed_easy.size() + p.seed_hard.size() - found.size());
    for (const auto& i : found) issues += " " + i + ";";
  }
  return {correct == 100 && total == 100, std::to_string(correct) + "/" + std::to_string(total) + " seed labels correct" + issues};
}

Outcome a6() {
  const auto corpus = load_corpus(bundled_corpus_path(), *bundled().dict);
  const SimulationConfig defaults;
  const auto split = split_train_test(corpus.unique_words, defaults.train_fraction, defaults.rng_seed);
  bool ok = true;
  std::string d;
  double worst = 1.0;
  for (const auto& p : wordease::testing::bundled_profiles()) {
    // Classifier alone: fit on the oracle labels of every train word, then
    // score test words by probability (no list overrides apply to them).
    std::vector<LabeledExample> ex;
    for (const auto& w : split.train) {
      ex.push_back({w, SparseVector::from_view(bundled().embedding->vector_of(w)), oracle_label(p, w, *bundled().dict)});
    }
    const auto model = train(ex, bundled().embedding->dimension());
    ConfusionCounts counts;
    for (const auto& w : split.test) {
      const bool truth = oracle_label(p, w, *bundled().dict) == Label::Hard;
      const bool pred = prob_hard(model, bundled().embedding->vector_of(w)) > defaults.eval_decision_threshold;
      if (pred && truth) ++counts.tp;
      else if (pred) ++counts.fp;
      else if (truth) ++counts.fn;
      else ++counts.tn;
    }
    const double acc = counts.metrics().accuracy;
    worst = std::min(worst, acc);
    ok = ok && acc >= 0.95;
    d += p.id + "=" + fmt(acc).substr(0, 5) + " ";
  }
  return {ok, "test accuracy per profile: " + d + "(min " + fmt(worst) + ", need >= 0.95)"};
}

Outcome a7(const TempDir& dir) {
  bool same_csv = true;
  for (const std::string s : {"explicit", "implicit", "random"}) {
    const std::vector<std::string> args = {"--scenario", s, "--interactions", "30", "--seed", "11"};
    simulate(dir.path() / ("det_a_" + s), args);
    simulate(dir.path() / ("det_b_" + s), args);
    for (const auto& entry : std::filesystem::directory_iterator(dir.path() / ("det_a_" + s))) {
      const auto other = dir.path() / ("det_b_" + s) / entry.path().filename();
      same_csv = same_csv && slurp(entry.path()) == slurp(other);
    }
  }
  const auto& p = wordease::testing::profile("user9");
  std::vector<LabeledExample> ex;
  for (const auto& w : p.seed_easy) ex.push_back({w, SparseVector::from_view(bundled().embedding->vector_of(w)), Label::Easy});
  for (const auto& w : p.seed_hard) ex.push_back({w, SparseVector::from_view(bundled().embedding->vector_of(w)), Label::Hard});
  const auto m1 = train(ex, bundled().embedding->dimension());
  const auto m2 = train(ex, bundled().embedding->dimension());
  const bool same_weights = m1.weights == m2.weights && m1.bias == m2.bias;
  return {same_csv && same_weights, std::string("simulate CSVs ") + (same_csv ? "byte-identical" : "DIFFER") +
                                        "; train weights " + (same_weights ? "identical" : "DIFFER")};
}

Outcome a8() {
  using namespace wordease::testing;
  std::vector<std::pair<std::string, Violations>> checks;
  Violations disjoint;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto v = check_disjoint_and_versioned(seed, 40);
    disjoint.insert(disjoint.end(), v.begin(), v.end());
  }
  checks.emplace_back("disjoint lists + version monotonicity", disjoint);
  checks.emplace_back("no repeated queries", check_queries_never_repeat(21, 40));
  checks.emplace_back("labeled-word overrides", check_label_overrides(31, 30));
  checks.emplace_back("model matches lists", check_model_matches_lists(41, 40));
  checks.emplace_back("crash-recovery round trip", check_persistence_round_trip(51, 40));
  bool ok = true;
  std::string d;
  for (const auto& [name, v] : checks) {
    ok = ok && v.empty();
    d += name + (v.empty() ? " ok; " : " FAILED (" + v.front() + "); ");
  }
  return {ok, d};
}

}  // namespace

int main() {
  TempDir dir;
  Curves curves;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", [&] { return a1(curves, dir); }}, {"A2", [&] { return a2(curves, dir); }},
      {"A3", [&] { return a3(curves, dir); }}, {"A4", [&] { return a4(curves, dir); }},
      {"A5", a5},                              {"A6", a6},
      {"A7", [&] { return a7(dir); }},         {"A8", a8}};
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << " [" << fmt(secs).substr(0, 5)
              << "s]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
