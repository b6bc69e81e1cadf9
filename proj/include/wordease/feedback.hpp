#pragma once

// Per-user active-learning state.
//
// A UserModel is an immutable value: every feedback operation returns a new
// model with the updated word lists, a classifier retrained on exactly those
// lists, and version + 1. Words the user labelled directly override the
// classifier (hard words always highlight, easy words never do).

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wordease/classifier.hpp"
#include "wordease/error.hpp"
#include "wordease/phonetics.hpp"

namespace wordease {

inline constexpr double kDefaultHighlightThreshold = 0.7;
inline constexpr std::size_t kRecommendedSeedCount = 5;

class UserModel {
 public:
  [[nodiscard]] const std::set<std::string>& easy_words() const noexcept { return easy_; }
  [[nodiscard]] const std::set<std::string>& hard_words() const noexcept { return hard_; }
  [[nodiscard]] const TriggerModel& model() const noexcept { return model_; }
  [[nodiscard]] double highlight_threshold() const noexcept { return threshold_; }
  [[nodiscard]] std::uint64_t version() const noexcept { return version_; }
  [[nodiscard]] const PhoneticEmbedding& embedding() const noexcept { return *embedding_; }
  [[nodiscard]] const std::shared_ptr<const PhoneticEmbedding>& embedding_ptr() const noexcept {
    return embedding_;
  }
  [[nodiscard]] const std::string& embedding_ref() const noexcept { return embedding_->fingerprint(); }
  /// Non-fatal notes from construction (dropped OOV seeds, short seed lists).
  [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  [[nodiscard]] bool is_labeled(std::string_view word) const {
    const auto w = to_lower_ascii(word);
    return easy_.count(w) > 0 || hard_.count(w) > 0;
  }

  /// Same lists, threshold, version and classifier parameters.
  [[nodiscard]] bool same_state(const UserModel& other) const {
    return easy_ == other.easy_ && hard_ == other.hard_ && threshold_ == other.threshold_ &&
           version_ == other.version_ && model_.weights == other.model_.weights &&
           model_.bias == other.model_.bias && embedding_ref() == other.embedding_ref();
  }

 private:
  friend UserModel init_user_model(const std::vector<std::string>&, const std::vector<std::string>&,
                                   std::shared_ptr<const PhoneticEmbedding>, double,
                                   const TrainingConfig&);
  friend UserModel user_model_from_json(const nlohmann::json&,
                                        std::shared_ptr<const PhoneticEmbedding>);
  friend UserModel relabel(const UserModel&, const std::vector<std::string>&,
                           const std::vector<std::string>&, std::optional<double>);

  void retrain() {
    std::vector<LabeledExample> examples;
    examples.reserve(easy_.size() + hard_.size());
    std::set<std::string> all(easy_);
    all.insert(hard_.begin(), hard_.end());
    for (const auto& w : all) {
      examples.push_back({w, SparseVector::from_view(embedding_->vector_of(w)),
                          hard_.count(w) ? Label::Hard : Label::Easy});
    }
    model_ = train(examples, embedding_->dimension(), model_.config);
    model_.embedding_fingerprint = embedding_->fingerprint();
  }

  std::set<std::string> easy_;
  std::set<std::string> hard_;
  TriggerModel model_;
  double threshold_ = kDefaultHighlightThreshold;
  std::uint64_t version_ = 0;
  std::shared_ptr<const PhoneticEmbedding> embedding_;
  std::vector<std::string> warnings_;
};

inline void check_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "highlight threshold " + std::to_string(t) + " outside [0,1]");
  }
}

inline UserModel init_user_model(const std::vector<std::string>& seed_easy,
                                 const std::vector<std::string>& seed_hard,
                                 std::shared_ptr<const PhoneticEmbedding> embedding,
                                 double threshold = kDefaultHighlightThreshold,
                                 const TrainingConfig& training = {}) {
  if (!embedding) throw Error(ErrorCode::InvalidArgument, "embedding is required");
  check_threshold(threshold);
  UserModel um;
  um.embedding_ = std::move(embedding);
  um.threshold_ = threshold;
  um.model_.config = training;

  std::set<std::string> easy_all;
  for (const auto& w : seed_easy) easy_all.insert(to_lower_ascii(w));
  for (const auto& w : seed_hard) {
    const auto key = to_lower_ascii(w);
    if (easy_all.count(key)) {
      throw Error(ErrorCode::OverlappingSeeds, "'" + key + "' is listed as both easy and hard");
    }
  }
  const auto filter = [&](const std::vector<std::string>& words, std::set<std::string>& out,
                          const char* which) {
    for (const auto& w : words) {
      auto key = to_lower_ascii(w);
      if (!um.embedding_->contains(key)) {
        um.warnings_.push_back("dropped " + std::string(which) + " seed '" + key +
                               "': not in the pronouncing dictionary");
        continue;
      }
      out.insert(std::move(key));
    }
    if (out.empty()) {
      throw Error(ErrorCode::EmptyList, std::string("no in-vocabulary ") + which + " seed words");
    }
    if (out.size() < kRecommendedSeedCount) {
      um.warnings_.push_back("only " + std::to_string(out.size()) + " " + which +
                             " seed words; at least 5 are recommended");
    }
  };
  filter(seed_easy, um.easy_, "easy");
  filter(seed_hard, um.hard_, "hard");
  um.retrain();
  return um;
}

struct WordPrediction {
  std::optional<double> prob;  // absent for out-of-vocabulary words
  bool highlighted = false;
};

inline WordPrediction predict_word(const UserModel& um, std::string_view word) {
  const auto key = to_lower_ascii(word);
  const auto row = um.embedding().row_of(key);
  if (!row) return {};
  const double p = prob_hard(um.model(), um.embedding().row(*row));
  if (um.hard_words().count(key)) return {p, true};
  if (um.easy_words().count(key)) return {p, false};
  return {p, p > um.highlight_threshold()};
}

/// Adds labels and/or changes the threshold as one transition (version + 1).
/// All words are validated before anything changes.
inline UserModel relabel(const UserModel& um, const std::vector<std::string>& add_easy,
                         const std::vector<std::string>& add_hard,
                         std::optional<double> threshold = std::nullopt) {
  if (threshold) check_threshold(*threshold);
  UserModel next = um;
  next.warnings_.clear();
  std::set<std::string> easy_new;
  std::set<std::string> hard_new;
  const auto validate = [&](const std::vector<std::string>& words, std::set<std::string>& out) {
    for (const auto& w : words) {
      auto key = to_lower_ascii(w);
      if (!um.embedding().contains(key)) throw Error(ErrorCode::OutOfVocabulary, "'" + key + "'");
      if (um.is_labeled(key)) throw Error(ErrorCode::AlreadyLabeled, "'" + key + "'");
      out.insert(std::move(key));
    }
  };
  validate(add_easy, easy_new);
  validate(add_hard, hard_new);
  for (const auto& w : hard_new) {
    if (easy_new.count(w)) {
      throw Error(ErrorCode::OverlappingSeeds, "'" + w + "' is listed as both easy and hard");
    }
  }
  next.easy_.insert(easy_new.begin(), easy_new.end());
  next.hard_.insert(hard_new.begin(), hard_new.end());
  if (threshold) next.threshold_ = *threshold;
  if (!easy_new.empty() || !hard_new.empty()) next.retrain();
  ++next.version_;
  return next;
}

inline UserModel apply_explicit_feedback(const UserModel& um, std::string_view word, bool is_hard) {
  const std::vector<std::string> words{std::string(word)};
  return is_hard ? relabel(um, {}, words) : relabel(um, words, {});
}

struct Ignore {};
struct Substitute {
  std::string chosen_word;
};
using ImplicitAction = std::variant<Ignore, Substitute>;

inline UserModel apply_implicit_feedback(const UserModel& um, std::string_view highlighted_word,
                                         const ImplicitAction& action) {
  const auto key = to_lower_ascii(highlighted_word);
  if (!um.embedding().contains(key)) throw Error(ErrorCode::OutOfVocabulary, "'" + key + "'");
  if (!predict_word(um, key).highlighted) {
    throw Error(ErrorCode::NotHighlighted, "'" + key + "' is not highlighted");
  }
  if (std::holds_alternative<Ignore>(action)) {
    if (um.is_labeled(key)) throw Error(ErrorCode::AlreadyLabeled, "'" + key + "'");
    return relabel(um, {key}, {});
  }
  const auto chosen = to_lower_ascii(std::get<Substitute>(action).chosen_word);
  if (chosen == key) {
    throw Error(ErrorCode::InvalidArgument, "substitute must differ from the replaced word");
  }
  if (!um.embedding().contains(chosen)) throw Error(ErrorCode::OutOfVocabulary, "'" + chosen + "'");
  std::vector<std::string> add_hard;
  std::vector<std::string> add_easy;
  if (!um.is_labeled(key)) add_hard.push_back(key);
  if (!um.is_labeled(chosen)) add_easy.push_back(chosen);
  if (add_hard.empty() && add_easy.empty()) {
    throw Error(ErrorCode::AlreadyLabeled, "'" + key + "' and '" + chosen + "' are both labeled");
  }
  return relabel(um, add_easy, add_hard);
}

enum class FeedbackKind { Explicit, Implicit };

struct FeedbackEvent {
  FeedbackKind kind = FeedbackKind::Explicit;
  std::string word;
  bool is_hard = false;   // Explicit
  ImplicitAction action;  // Implicit
};

inline UserModel apply_feedback(const UserModel& um, const FeedbackEvent& event) {
  if (event.kind == FeedbackKind::Explicit) return apply_explicit_feedback(um, event.word, event.is_hard);
  return apply_implicit_feedback(um, event.word, event.action);
}

/// Unlabeled word with maximal prediction entropy; ties go to the smaller
/// word. The pool defaults to the whole embedding vocabulary; pool words
/// outside the vocabulary are ignored.
inline std::string next_query(const UserModel& um,
                              std::optional<std::span<const std::string>> pool = std::nullopt) {
  const auto& emb = um.embedding();
  std::optional<std::string> best;
  double best_entropy = -1.0;
  const auto consider = [&](const std::string& w, std::uint32_t row) {
    if (um.easy_words().count(w) || um.hard_words().count(w)) return;
    const double h = entropy(prob_hard(um.model(), emb.row(row)));
    if (h > best_entropy || (h == best_entropy && w < *best)) {
      best_entropy = h;
      best = w;
    }
  };
  if (pool) {
    for (const auto& raw : *pool) {
      const auto w = to_lower_ascii(raw);
      if (const auto row = emb.row_of(w)) consider(w, *row);
    }
  } else {
    for (std::uint32_t r = 0; r < emb.size(); ++r) consider(emb.words()[r], r);
  }
  if (!best) throw Error(ErrorCode::ExhaustedPool, "no unlabeled words left in the query pool");
  return *best;
}

inline constexpr int kUserModelFormatVersion = 1;

inline nlohmann::json to_json(const UserModel& um) {
  return {{"format", "wordease.user_model"},
          {"format_version", kUserModelFormatVersion},
          {"easy_words", um.easy_words()},
          {"hard_words", um.hard_words()},
          {"highlight_threshold", um.highlight_threshold()},
          {"version", um.version()},
          {"embedding_ref", um.embedding_ref()},
          {"model", um.model()}};
}

inline UserModel user_model_from_json(const nlohmann::json& j,
                                      std::shared_ptr<const PhoneticEmbedding> embedding) {
  if (!embedding) throw Error(ErrorCode::InvalidArgument, "embedding is required");
  UserModel um;
  try {
    if (j.at("format").get<std::string>() != "wordease.user_model") {
      throw Error(ErrorCode::InvalidFormat, "not a user model document");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kUserModelFormatVersion) {
      throw Error(ErrorCode::InvalidFormat,
                  "unsupported user model format_version " + std::to_string(version));
    }
    um.easy_ = j.at("easy_words").get<std::set<std::string>>();
    um.hard_ = j.at("hard_words").get<std::set<std::string>>();
    um.threshold_ = j.at("highlight_threshold").get<double>();
    um.version_ = j.at("version").get<std::uint64_t>();
    um.model_ = j.at("model").get<TriggerModel>();
    const auto ref = j.at("embedding_ref").get<std::string>();
    if (ref != embedding->fingerprint()) {
      throw Error(ErrorCode::InvalidFormat, "user model was built on embedding " + ref +
                                                ", loaded embedding is " + embedding->fingerprint());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidFormat, std::string("user model: ") + e.what());
  }
  check_threshold(um.threshold_);
  if (um.model_.dimension() != embedding->dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "user model dimension does not match embedding");
  }
  for (const auto& w : um.easy_) {
    if (um.hard_.count(w)) throw Error(ErrorCode::OverlappingSeeds, "'" + w + "' in both lists");
    if (!embedding->contains(w)) throw Error(ErrorCode::OutOfVocabulary, "'" + w + "'");
  }
  for (const auto& w : um.hard_) {
    if (!embedding->contains(w)) throw Error(ErrorCode::OutOfVocabulary, "'" + w + "'");
  }
  um.embedding_ = std::move(embedding);
  return um;
}

}  // namespace wordease
