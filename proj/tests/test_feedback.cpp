#include <gtest/gtest.h>

#include "properties.hpp"
#include "support.hpp"
#include "wordease/feedback.hpp"

using namespace wordease;
using wordease::testing::bundled;
using wordease::testing::first_profile_model;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

/// First unlabeled candidate with the given highlight state.
std::string word_with_state(const UserModel& um, const std::vector<std::string>& candidates, bool highlighted) {
  for (const auto& w : candidates) {
    if (!um.is_labeled(w) && predict_word(um, w).highlighted == highlighted) return w;
  }
  throw std::runtime_error("no candidate");
}

const std::vector<std::string> kCandidates = {"country", "great", "grow", "ground", "brown", "table", "house",
                                              "apple",   "green", "grass", "train",  "drum",  "sun",   "moon"};

}  // namespace

TEST(InitUserModel, FirstProfileSeedsBuildAModel) {
  const auto um = first_profile_model();
  EXPECT_EQ(um.version(), 0u);
  EXPECT_EQ(um.easy_words().size(), 5u);
  EXPECT_EQ(um.hard_words().size(), 5u);
  EXPECT_DOUBLE_EQ(um.highlight_threshold(), 0.7);
  EXPECT_TRUE(um.warnings().empty());
  EXPECT_EQ(um.model().embedding_fingerprint, bundled().embedding->fingerprint());
}

TEST(InitUserModel, OverlapIsRejectedNamingTheWord) {
  try {
    init_user_model({"cat"}, {"CAT"}, bundled().embedding);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingSeeds);
    EXPECT_NE(std::string(e.what()).find("cat"), std::string::npos);
  }
}

TEST(InitUserModel, AllOovListIsEmpty) {
  EXPECT_EQ(code_of([] { init_user_model({"zzqx"}, {"graph", "group"}, bundled().embedding); }),
            ErrorCode::EmptyList);
}

TEST(InitUserModel, OovSeedsAreDroppedWithWarning) {
  const auto um = init_user_model({"zzqx", "clock", "water"}, {"graph", "group"}, bundled().embedding);
  EXPECT_EQ(um.easy_words(), (std::set<std::string>{"clock", "water"}));
  ASSERT_FALSE(um.warnings().empty());
  EXPECT_NE(um.warnings().front().find("zzqx"), std::string::npos);
}

TEST(InitUserModel, ThresholdOutsideUnitIntervalIsRejected) {
  EXPECT_EQ(code_of([] { init_user_model({"cat"}, {"graph"}, bundled().embedding, 1.5); }), ErrorCode::OutOfRange);
}

TEST(PredictWord, LabelsOverrideTheClassifier) {
  const auto um = first_profile_model();
  for (const auto& w : um.hard_words()) EXPECT_TRUE(predict_word(um, w).highlighted) << w;
  for (const auto& w : um.easy_words()) EXPECT_FALSE(predict_word(um, w).highlighted) << w;
}

TEST(PredictWord, OovIsNeverHighlighted) {
  const auto p = predict_word(first_profile_model(0.0), "zzqx");
  EXPECT_FALSE(p.highlighted);
  EXPECT_FALSE(p.prob.has_value());
}

TEST(PredictWord, StrictlyAboveThresholdIsHighlighted) {
  // Place the threshold just below and exactly at a word's probability.
  const auto base = first_profile_model();
  const double p = *predict_word(base, "country").prob;
  const auto below = relabel(base, {}, {}, p - 1e-9);
  const auto at = relabel(base, {}, {}, p);
  EXPECT_TRUE(predict_word(below, "country").highlighted);
  EXPECT_FALSE(predict_word(at, "country").highlighted);
}

TEST(ExplicitFeedback, AddsLabelAndBumpsVersion) {
  const auto um = first_profile_model();
  const auto next = apply_explicit_feedback(um, "chemical", true);
  EXPECT_EQ(next.version(), um.version() + 1);
  EXPECT_TRUE(next.hard_words().count("chemical"));
  EXPECT_FALSE(um.hard_words().count("chemical"));  // original untouched
  EXPECT_EQ(code_of([&] { apply_explicit_feedback(next, "chemical", false); }), ErrorCode::AlreadyLabeled);
  EXPECT_EQ(code_of([&] { apply_explicit_feedback(next, "zzqx", false); }), ErrorCode::OutOfVocabulary);
}

TEST(ImplicitFeedback, IgnoreMovesWordToEasy) {
  const auto um = first_profile_model(0.0);  // everything unlabeled is highlighted
  ASSERT_TRUE(predict_word(um, "country").highlighted);
  const auto next = apply_implicit_feedback(um, "country", Ignore{});
  EXPECT_TRUE(next.easy_words().count("country"));
  EXPECT_FALSE(predict_word(next, "country").highlighted);
  EXPECT_EQ(next.version(), um.version() + 1);
}

TEST(ImplicitFeedback, SubstituteAddsTwoExamples) {
  const auto um = first_profile_model(0.0);
  const auto next = apply_implicit_feedback(um, "country", Substitute{"nation"});
  EXPECT_TRUE(next.hard_words().count("country"));
  EXPECT_TRUE(next.easy_words().count("nation"));
  EXPECT_EQ(next.easy_words().size() + next.hard_words().size(),
            um.easy_words().size() + um.hard_words().size() + 2);
  EXPECT_EQ(next.version(), um.version() + 1);
}

TEST(ImplicitFeedback, SubstituteWithLabeledChoiceAddsOne) {
  const auto um = first_profile_model(0.0);
  const auto next = apply_implicit_feedback(um, "country", Substitute{"water"});  // already easy
  EXPECT_EQ(next.easy_words().size() + next.hard_words().size(),
            um.easy_words().size() + um.hard_words().size() + 1);
}

TEST(ImplicitFeedback, RejectsInvalidActions) {
  const auto um = first_profile_model();
  const auto plain = word_with_state(um, kCandidates, false);
  EXPECT_EQ(code_of([&] { apply_implicit_feedback(um, plain, Ignore{}); }), ErrorCode::NotHighlighted);
  EXPECT_EQ(code_of([&] { apply_implicit_feedback(um, "zzqx", Ignore{}); }), ErrorCode::OutOfVocabulary);
  EXPECT_EQ(code_of([&] { apply_implicit_feedback(um, "graph", Ignore{}); }), ErrorCode::AlreadyLabeled);
  EXPECT_EQ(code_of([&] { apply_implicit_feedback(um, "graph", Substitute{"graph"}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { apply_implicit_feedback(um, "graph", Substitute{"zzqx"}); }),
            ErrorCode::OutOfVocabulary);
  EXPECT_EQ(code_of([&] { apply_implicit_feedback(um, "graph", Substitute{"water"}); }),
            ErrorCode::AlreadyLabeled);
}

TEST(Relabel, ValidatesEverythingBeforeChanging) {
  const auto um = first_profile_model();
  EXPECT_EQ(code_of([&] { relabel(um, {"cat"}, {"cat"}); }), ErrorCode::OverlappingSeeds);
  EXPECT_EQ(code_of([&] { relabel(um, {"cat"}, {"graph"}); }), ErrorCode::AlreadyLabeled);
  EXPECT_EQ(code_of([&] { relabel(um, {}, {}, 2.0); }), ErrorCode::OutOfRange);
  const auto t = relabel(um, {}, {}, 0.2);
  EXPECT_DOUBLE_EQ(t.highlight_threshold(), 0.2);
  EXPECT_EQ(t.model().weights, um.model().weights);
  EXPECT_EQ(t.version(), 1u);
}

TEST(NextQuery, PicksMaximumEntropyWord) {
  const auto um = first_profile_model();
  std::vector<std::string> pool = {"country", "table", "grapefruit", "street", "moon"};
  std::string expected;
  double best = -1;
  for (const auto& w : pool) {
    const double p = *predict_word(um, w).prob;
    const double h = wordease::testing::reference_entropy(p);
    if (h > best) {
      best = h;
      expected = w;
    }
  }
  EXPECT_EQ(next_query(um, std::span<const std::string>(pool)), expected);
}

TEST(NextQuery, TiesGoToTheSmallerWord) {
  // "two" and "to" share a pronunciation and therefore a probability.
  const auto um = first_profile_model();
  std::vector<std::string> pool = {"two", "to"};
  ASSERT_EQ(*predict_word(um, "two").prob, *predict_word(um, "to").prob);
  EXPECT_EQ(next_query(um, std::span<const std::string>(pool)), "to");
}

TEST(NextQuery, LabeledOnlyPoolIsExhausted) {
  const auto um = first_profile_model();
  std::vector<std::string> pool = {"graph", "water", "zzqx"};
  EXPECT_EQ(code_of([&] { next_query(um, std::span<const std::string>(pool)); }), ErrorCode::ExhaustedPool);
}

TEST(NextQuery, DefaultPoolIsWholeVocabulary) {
  const auto um = first_profile_model();
  const auto q = next_query(um);
  EXPECT_TRUE(bundled().embedding->contains(q));
  EXPECT_FALSE(um.is_labeled(q));
}

TEST(UserModelJson, RoundTripIsExact) {
  const auto um = apply_explicit_feedback(first_profile_model(), "chemical", true);
  const auto back = user_model_from_json(nlohmann::json::parse(to_json(um).dump()), bundled().embedding);
  EXPECT_TRUE(back.same_state(um));
}

TEST(UserModelJson, RejectsForeignEmbedding) {
  const auto um = first_profile_model();
  const auto mini = std::make_shared<const PhoneticEmbedding>(
      build_embedding(load_pronouncing_dict(wordease::testing::test_data("mini_dict.txt"))));
  EXPECT_EQ(code_of([&] { user_model_from_json(to_json(um), mini); }), ErrorCode::InvalidFormat);
}

// Randomised invariants.

TEST(FeedbackProperties, ListsStayDisjointAndVersionsStepByOne) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto v = wordease::testing::check_disjoint_and_versioned(seed, 40);
    EXPECT_TRUE(v.empty()) << v.front();
  }
}

TEST(FeedbackProperties, LabelOverridesHoldAtEveryThreshold) {
  const auto v = wordease::testing::check_label_overrides(11, 25);
  EXPECT_TRUE(v.empty()) << v.front();
}

TEST(FeedbackProperties, ClassifierMatchesCurrentLists) {
  const auto v = wordease::testing::check_model_matches_lists(5, 40);
  EXPECT_TRUE(v.empty()) << v.front();
}

TEST(FeedbackProperties, QueriesNeverRepeat) {
  const auto v = wordease::testing::check_queries_never_repeat(3, 30);
  EXPECT_TRUE(v.empty()) << v.front();
}

TEST(FeedbackProperties, PersistedSessionsSurviveRestart) {
  const auto v = wordease::testing::check_persistence_round_trip(9, 25);
  EXPECT_TRUE(v.empty()) << v.front();
}
