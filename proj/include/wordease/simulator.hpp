#pragma once

// Simulated users and the feedback-loop evaluation harness.
//
// A simulated user is a difficulty pattern (the oracle) plus seed words. A
// run starts a UserModel from the seeds and performs `interactions` feedback
// steps in one of three scenarios, scoring the model on a held-out test split
// after every step:
//   explicit  answer the maximum-entropy query drawn from the train split
//   implicit  react to the first highlighted, unlabeled train word in corpus
//             order: ignore it if easy, otherwise take the first suggested
//             alternative (or label it hard if nothing is suggested)
//   random    label a uniformly drawn unlabeled train word

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wordease/alternatives.hpp"
#include "wordease/detail/csv.hpp"
#include "wordease/detail/rng.hpp"
#include "wordease/error.hpp"
#include "wordease/feedback.hpp"
#include "wordease/phonetics.hpp"
#include "wordease/tokenizer.hpp"

namespace wordease {

// ---------------------------------------------------------------- patterns

/// First phoneme is a consonant and the second is R ("graph", "provost").
struct StartsConsonantThenRPhoneme {};
/// Spelling starts with one of the prefixes ("st", "fl").
struct StartsWithGrapheme {
  std::vector<std::string> prefixes;
};
/// Second letter is one of the letters ("r", "l").
struct SecondLetterIn {
  std::string letters;
};
/// Spelling contains one of the substrings ("ch", "sc").
struct ContainsSubstring {
  std::vector<std::string> substrings;
};
/// First letter is one of the letters ("b", "p", ...).
struct StartsWithLetterIn {
  std::string letters;
};

using PatternPrimitive = std::variant<StartsConsonantThenRPhoneme, StartsWithGrapheme,
                                      SecondLetterIn, ContainsSubstring, StartsWithLetterIn>;

/// Disjunction of primitives.
struct PatternExpr {
  std::vector<PatternPrimitive> any_of;

  [[nodiscard]] bool matches(std::string_view word, const std::vector<std::string>& phonemes) const {
    const auto starts_with = [&](std::string_view p) { return word.substr(0, p.size()) == p; };
    for (const auto& prim : any_of) {
      const bool hit = std::visit(
          [&](const auto& p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, StartsConsonantThenRPhoneme>) {
              return phonemes.size() >= 2 && is_consonant(phonemes[0]) && phonemes[1] == "R";
            } else if constexpr (std::is_same_v<T, StartsWithGrapheme>) {
              return std::any_of(p.prefixes.begin(), p.prefixes.end(), starts_with);
            } else if constexpr (std::is_same_v<T, SecondLetterIn>) {
              return word.size() >= 2 && p.letters.find(word[1]) != std::string::npos;
            } else if constexpr (std::is_same_v<T, ContainsSubstring>) {
              return std::any_of(p.substrings.begin(), p.substrings.end(), [&](const auto& s) {
                return word.find(s) != std::string_view::npos;
              });
            } else {
              return !word.empty() && p.letters.find(word[0]) != std::string::npos;
            }
          },
          prim);
      if (hit) return true;
    }
    return false;
  }
};

struct UserProfile {
  std::string id;
  PatternExpr pattern;
  std::vector<std::string> seed_easy;
  std::vector<std::string> seed_hard;
};

namespace detail {

inline std::string lower_letters(const nlohmann::json& j) {
  std::string s;
  if (j.is_string()) {
    s = j.get<std::string>();
  } else {
    for (const auto& v : j) s += v.get<std::string>();
  }
  return to_lower_ascii(s);
}

inline std::vector<std::string> lower_list(const nlohmann::json& j) {
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(to_lower_ascii(v.get<std::string>()));
  return out;
}

}  // namespace detail

inline PatternPrimitive pattern_primitive_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "starts_consonant_then_r_phoneme") return StartsConsonantThenRPhoneme{};
  if (type == "starts_with_grapheme") return StartsWithGrapheme{detail::lower_list(j.at("values"))};
  if (type == "second_letter_in") return SecondLetterIn{detail::lower_letters(j.at("values"))};
  if (type == "contains_substring") return ContainsSubstring{detail::lower_list(j.at("values"))};
  if (type == "starts_with_letter_in") return StartsWithLetterIn{detail::lower_letters(j.at("values"))};
  throw Error(ErrorCode::InvalidFormat, "unknown pattern primitive '" + type + "'");
}

/// Profiles document: {"profiles": [{"id", "pattern": [primitive...],
/// "seed_easy": [...], "seed_hard": [...]}, ...]}
inline std::vector<UserProfile> parse_profiles(const nlohmann::json& doc) {
  std::vector<UserProfile> out;
  try {
    for (const auto& p : doc.at("profiles")) {
      UserProfile profile;
      profile.id = p.at("id").get<std::string>();
      for (const auto& prim : p.at("pattern")) {
        profile.pattern.any_of.push_back(pattern_primitive_from_json(prim));
      }
      if (profile.pattern.any_of.empty()) {
        throw Error(ErrorCode::InvalidFormat, "profile '" + profile.id + "' has an empty pattern");
      }
      profile.seed_easy = detail::lower_list(p.at("seed_easy"));
      profile.seed_hard = detail::lower_list(p.at("seed_hard"));
      out.push_back(std::move(profile));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidFormat, std::string("profiles: ") + e.what());
  }
  if (out.empty()) throw Error(ErrorCode::InvalidFormat, "profiles: no profiles defined");
  return out;
}

inline std::vector<UserProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open profiles " + path.string());
  try {
    return parse_profiles(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidFormat, path.string() + ": " + e.what());
  }
}

inline Label oracle_label(const UserProfile& profile, std::string_view word,
                          const PronouncingDict& dict) {
  const auto seq = phonemes_of(dict, word);
  return profile.pattern.matches(seq.word, seq.phonemes) ? Label::Hard : Label::Easy;
}

/// Seed words that are out of vocabulary or contradict the profile's own
/// oracle, as human-readable messages. Empty means the profile is consistent.
inline std::vector<std::string> profile_issues(const UserProfile& profile,
                                               const PronouncingDict& dict) {
  std::vector<std::string> issues;
  const auto check = [&](const std::vector<std::string>& words, Label expected) {
    for (const auto& w : words) {
      if (!dict.contains(w)) {
        issues.push_back(profile.id + ": seed '" + w + "' not in dictionary");
      } else if (oracle_label(profile, w, dict) != expected) {
        issues.push_back(profile.id + ": seed '" + w + "' listed " + to_string(expected) +
                         " but pattern says " + to_string(oracle_label(profile, w, dict)));
      }
    }
  };
  check(profile.seed_easy, Label::Easy);
  check(profile.seed_hard, Label::Hard);
  return issues;
}

// ------------------------------------------------------------------ corpus

struct Corpus {
  std::vector<std::string> sequence;      // in-vocabulary words, lowercase, text order
  std::vector<std::string> unique_words;  // sorted
};

enum class CorpusFormat { PlainText, Csv };

inline Corpus corpus_from_text(std::string_view text, const PronouncingDict& dict) {
  Corpus corpus;
  std::set<std::string> unique;
  for (const auto& t : tokenize(text)) {
    if (t.kind != TokenKind::Word) continue;
    auto w = to_lower_ascii(t.text);
    if (!dict.contains(w)) continue;
    unique.insert(w);
    corpus.sequence.push_back(std::move(w));
  }
  corpus.unique_words.assign(unique.begin(), unique.end());
  return corpus;
}

/// Plain text, or a CSV whose `column` cells are concatenated in row order.
inline Corpus load_corpus(const std::filesystem::path& path, const PronouncingDict& dict,
                          CorpusFormat format = CorpusFormat::PlainText,
                          const std::string& column = "transcript") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open corpus " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (format == CorpusFormat::Csv) {
    const auto rows = detail::parse_csv(text);
    if (rows.empty()) throw Error(ErrorCode::EmptyCorpus, path.string() + ": empty CSV");
    const auto& header = rows.front();
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) {
      throw Error(ErrorCode::MissingColumn, path.string() + ": no column '" + column + "'");
    }
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::string joined;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (col < rows[r].size()) {
        joined += rows[r][col];
        joined += '\n';
      }
    }
    text = std::move(joined);
  }
  auto corpus = corpus_from_text(text, dict);
  if (corpus.unique_words.empty()) {
    throw Error(ErrorCode::EmptyCorpus, path.string() + ": no in-vocabulary words");
  }
  return corpus;
}

struct TrainTestSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Seeded shuffle of the (sorted) unique words; the first round(f * N) go to
/// train.
inline TrainTestSplit split_train_test(std::vector<std::string> unique_words, double train_fraction,
                                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "train_fraction must be in (0, 1)");
  }
  std::sort(unique_words.begin(), unique_words.end());
  unique_words.erase(std::unique(unique_words.begin(), unique_words.end()), unique_words.end());
  if (unique_words.size() < 4) {
    throw Error(ErrorCode::TooFewWords,
                "need at least 4 unique words, have " + std::to_string(unique_words.size()));
  }
  detail::SeededRng rng(seed);
  rng.shuffle(unique_words);
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(unique_words.size())));
  TrainTestSplit split;
  split.train.assign(unique_words.begin(), unique_words.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(unique_words.begin() + static_cast<std::ptrdiff_t>(n_train), unique_words.end());
  return split;
}

// ----------------------------------------------------------------- metrics

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  [[nodiscard]] Metrics metrics() const {
    Metrics m;
    const auto total = tp + fp + fn + tn;
    m.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
    m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
  }
};

/// HARD is the positive class. A word is predicted HARD if it is hard-listed,
/// or it is not easy-listed and P(hard) > decision_threshold.
inline bool predicted_hard(const UserModel& um, std::string_view word, double decision_threshold) {
  const auto key = to_lower_ascii(word);
  if (um.hard_words().count(key)) return true;
  if (um.easy_words().count(key)) return false;
  return prob_hard(um.model(), um.embedding().vector_of(key)) > decision_threshold;
}

inline Metrics evaluate(const UserModel& um, const std::vector<std::string>& test_words,
                        const UserProfile& profile, const PronouncingDict& dict,
                        double decision_threshold = 0.5) {
  if (test_words.empty()) throw Error(ErrorCode::EmptyTestSet, "no test words");
  ConfusionCounts c;
  for (const auto& w : test_words) {
    const bool truth = oracle_label(profile, w, dict) == Label::Hard;
    const bool pred = predicted_hard(um, w, decision_threshold);
    if (pred && truth) ++c.tp;
    else if (pred) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return c.metrics();
}

// -------------------------------------------------------------- simulation

enum class Scenario { Explicit, Implicit, Random };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Explicit: return "explicit";
    case Scenario::Implicit: return "implicit";
    case Scenario::Random: return "random";
  }
  return "?";
}

inline Scenario parse_scenario(std::string_view s) {
  const auto l = to_lower_ascii(s);
  if (l == "explicit") return Scenario::Explicit;
  if (l == "implicit") return Scenario::Implicit;
  if (l == "random") return Scenario::Random;
  throw Error(ErrorCode::InvalidConfig, "unknown scenario '" + std::string(s) + "'");
}

struct SimulationConfig {
  Scenario scenario = Scenario::Explicit;
  int interactions = 500;
  double train_fraction = 0.75;
  std::uint64_t rng_seed = 42;
  double implicit_highlight_threshold = 0.1;
  double eval_decision_threshold = 0.5;
  // Implicit scenario: pick the first alternative the oracle deems easy
  // instead of simply the first one offered.
  bool oracle_consistent_substitute = false;
  std::size_t max_alternatives = 10;
  TrainingConfig training;

  void validate() const {
    if (interactions < 1) throw Error(ErrorCode::InvalidConfig, "interactions must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "train_fraction must be in (0, 1)");
    }
    check_threshold(implicit_highlight_threshold);
    check_threshold(eval_decision_threshold);
    if (max_alternatives == 0) throw Error(ErrorCode::InvalidConfig, "max_alternatives must be >= 1");
  }
};

inline nlohmann::json to_json(const SimulationConfig& c) {
  return {{"scenario", to_string(c.scenario)},
          {"interactions", c.interactions},
          {"train_fraction", c.train_fraction},
          {"rng_seed", c.rng_seed},
          {"implicit_highlight_threshold", c.implicit_highlight_threshold},
          {"eval_decision_threshold", c.eval_decision_threshold},
          {"oracle_consistent_substitute", c.oracle_consistent_substitute},
          {"max_alternatives", c.max_alternatives},
          {"training", c.training}};
}

struct MetricsRow {
  int interaction = 0;
  Metrics metrics;
};

struct SimulationReport {
  std::string profile_id;
  Scenario scenario = Scenario::Explicit;
  SimulationConfig config;
  std::vector<MetricsRow> rows;  // rows[0] is the seed-only model
  std::optional<int> terminated_early_at;  // interaction count reached before stopping
  std::string stop_reason;
  int substitutions = 0;  // implicit: substitute actions
  int ignores = 0;        // implicit: ignore actions
  int fallbacks = 0;      // implicit: hard-labelled because no alternative survived
};

inline SimulationReport run_simulation(const UserProfile& profile, const Corpus& corpus,
                                       const SimulationConfig& config,
                                       const std::shared_ptr<const PhoneticEmbedding>& embedding,
                                       const PronouncingDict& dict, const SynonymSource& synonyms) {
  config.validate();
  const double highlight = config.scenario == Scenario::Implicit ? config.implicit_highlight_threshold
                                                                 : kDefaultHighlightThreshold;
  UserModel um = init_user_model(profile.seed_easy, profile.seed_hard, embedding, highlight,
                                 config.training);
  const auto split = split_train_test(corpus.unique_words, config.train_fraction, config.rng_seed);
  const std::set<std::string> train_set(split.train.begin(), split.train.end());

  SimulationReport report;
  report.profile_id = profile.id;
  report.scenario = config.scenario;
  report.config = config;
  const auto score = [&](int k) {
    report.rows.push_back({k, evaluate(um, split.test, profile, dict, config.eval_decision_threshold)});
  };
  score(0);

  const auto is_hard = [&](const std::string& w) { return oracle_label(profile, w, dict) == Label::Hard; };

  std::vector<std::string> train_sequence;  // implicit: corpus order, train words only
  std::vector<std::string> unlabeled;       // random: sorted unlabeled train words
  if (config.scenario == Scenario::Implicit) {
    for (const auto& w : corpus.sequence) {
      if (train_set.count(w)) train_sequence.push_back(w);
    }
  }
  if (config.scenario == Scenario::Random) {
    for (const auto& w : train_set) {
      if (!um.is_labeled(w)) unlabeled.push_back(w);
    }
  }
  detail::SeededRng rng(config.rng_seed ^ 0x9e3779b97f4a7c15ULL);

  for (int k = 1; k <= config.interactions; ++k) {
    try {
      switch (config.scenario) {
        case Scenario::Explicit: {
          const auto q = next_query(um, std::span<const std::string>(split.train));
          um = apply_explicit_feedback(um, q, is_hard(q));
          break;
        }
        case Scenario::Random: {
          if (unlabeled.empty()) throw Error(ErrorCode::ExhaustedPool, "no unlabeled train words left");
          const auto idx = static_cast<std::size_t>(rng.below(unlabeled.size()));
          const std::string q = unlabeled[idx];
          unlabeled.erase(unlabeled.begin() + static_cast<std::ptrdiff_t>(idx));
          um = apply_explicit_feedback(um, q, is_hard(q));
          break;
        }
        case Scenario::Implicit: {
          std::unordered_map<std::string, bool> highlighted;
          std::optional<std::string> target;
          for (const auto& w : train_sequence) {
            if (um.is_labeled(w)) continue;
            auto [it, fresh] = highlighted.try_emplace(w, false);
            if (fresh) it->second = predict_word(um, w).highlighted;
            if (it->second) {
              target = w;
              break;
            }
          }
          if (!target) {
            throw Error(ErrorCode::ExhaustedPool, "no highlighted unlabeled word left in the corpus");
          }
          if (!is_hard(*target)) {
            um = apply_implicit_feedback(um, *target, Ignore{});
            ++report.ignores;
            break;
          }
          std::vector<std::string> alts;
          try {
            alts = alternatives_for(*target, um, synonyms, config.max_alternatives);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::NoSynonymsKnown) throw;
          }
          std::optional<std::string> chosen;
          for (const auto& a : alts) {
            if (!config.oracle_consistent_substitute || !is_hard(a)) {
              chosen = a;
              break;
            }
          }
          if (chosen) {
            um = apply_implicit_feedback(um, *target, Substitute{*chosen});
            ++report.substitutions;
          } else {
            um = apply_explicit_feedback(um, *target, true);
            ++report.fallbacks;
          }
          break;
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExhaustedPool) throw;
      report.terminated_early_at = k - 1;
      report.stop_reason = e.what();
      break;
    }
    score(k);
  }
  return report;
}

// --------------------------------------------------------------- aggregate

struct AggregateRow {
  int interaction = 0;
  Metrics mean;
  std::size_t padded = 0;  // reports whose last row was carried forward here
};

struct AggregateReport {
  Scenario scenario = Scenario::Explicit;
  std::size_t reports = 0;
  std::vector<AggregateRow> rows;
};

/// Per-interaction arithmetic mean. Shorter (early-stopped) reports are padded
/// by carrying their last row forward; padding is counted per row.
inline AggregateReport aggregate(const std::vector<SimulationReport>& reports) {
  if (reports.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to aggregate");
  AggregateReport agg;
  agg.scenario = reports.front().scenario;
  agg.reports = reports.size();
  std::size_t length = 0;
  for (const auto& r : reports) {
    if (r.scenario != agg.scenario) {
      throw Error(ErrorCode::MixedScenarios, std::string("cannot aggregate ") + to_string(agg.scenario) +
                                                 " with " + to_string(r.scenario));
    }
    if (r.rows.empty()) throw Error(ErrorCode::InvalidArgument, "report without rows");
    length = std::max(length, r.rows.size());
  }
  const auto n = static_cast<double>(reports.size());
  for (std::size_t k = 0; k < length; ++k) {
    AggregateRow row;
    row.interaction = static_cast<int>(k);
    for (const auto& r : reports) {
      const bool pad = k >= r.rows.size();
      const auto& m = pad ? r.rows.back().metrics : r.rows[k].metrics;
      row.padded += pad ? 1 : 0;
      row.mean.accuracy += m.accuracy;
      row.mean.precision += m.precision;
      row.mean.recall += m.recall;
      row.mean.f1 += m.f1;
    }
    row.mean.accuracy /= n;
    row.mean.precision /= n;
    row.mean.recall /= n;
    row.mean.f1 /= n;
    agg.rows.push_back(row);
  }
  return agg;
}

// ------------------------------------------------------------------ output

namespace detail {

inline std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

inline constexpr std::string_view kReportCsvHeader =
    "profile,scenario,interaction,accuracy,precision,recall,f1";
inline constexpr std::string_view kAggregateCsvHeader =
    "scenario,interaction,accuracy,precision,recall,f1,reports,padded";

inline void write_report_csv(std::ostream& out, const std::vector<SimulationReport>& reports) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      out << detail::csv_escape(r.profile_id) << ',' << to_string(r.scenario) << ','
          << row.interaction << ',' << detail::fixed6(row.metrics.accuracy) << ','
          << detail::fixed6(row.metrics.precision) << ',' << detail::fixed6(row.metrics.recall) << ','
          << detail::fixed6(row.metrics.f1) << '\n';
    }
  }
}

inline void write_aggregate_csv(std::ostream& out, const AggregateReport& agg) {
  out << kAggregateCsvHeader << '\n';
  for (const auto& row : agg.rows) {
    out << to_string(agg.scenario) << ',' << row.interaction << ','
        << detail::fixed6(row.mean.accuracy) << ',' << detail::fixed6(row.mean.precision) << ','
        << detail::fixed6(row.mean.recall) << ',' << detail::fixed6(row.mean.f1) << ','
        << agg.reports << ',' << row.padded << '\n';
  }
}

/// Line chart of mean accuracy, precision and F1 per interaction.
inline void write_aggregate_svg(std::ostream& out, const AggregateReport& agg) {
  constexpr double W = 720, H = 400, L = 60, R = 20, T = 30, B = 50;
  const double max_x = std::max<double>(1.0, static_cast<double>(agg.rows.size() - 1));
  const auto px = [&](double x) { return L + (W - L - R) * x / max_x; };
  const auto py = [&](double y) { return T + (H - T - B) * (1.0 - y); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << L << "\" y=\"18\">" << to_string(agg.scenario) << " feedback, mean of "
      << agg.reports << " users</text>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << L << "\" y2=\"" << py(1)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = t / 4.0;
    out << "<text x=\"" << L - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << detail::fixed6(y).substr(0, 4) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">interaction (0.." << agg.rows.size() - 1 << ")</text>\n";
  struct Series {
    const char* name;
    const char* color;
    double Metrics::*field;
  };
  const Series series[] = {{"accuracy", "#1f77b4", &Metrics::accuracy},
                           {"precision", "#2ca02c", &Metrics::precision},
                           {"f1", "#d62728", &Metrics::f1}};
  int legend = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : agg.rows) {
      out << detail::fixed6(px(row.interaction)) << ',' << detail::fixed6(py(row.mean.*s.field)) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << W - R - 80 << "\" y=\"" << py(0) - 10 - 16 * legend++ << "\" fill=\""
        << s.color << "\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace wordease
