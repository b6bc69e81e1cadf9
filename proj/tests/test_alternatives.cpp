#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "wordease/detail/http.hpp"

#include "support.hpp"
#include "wordease/alternatives.hpp"
#include "wordease/remote_synonyms.hpp"

using namespace wordease;
using wordease::testing::bundled;

namespace {

UserModel user1(double threshold = kDefaultHighlightThreshold) {
  const auto& p = wordease::testing::profile("user1");
  return init_user_model(p.seed_easy, p.seed_hard, bundled().embedding, threshold);
}

SynonymSource offline_only(std::unordered_map<std::string, std::vector<std::string>> entries) {
  return {std::make_shared<const Thesaurus>(std::move(entries)), {}};
}

/// Serves DataMuse-shaped responses on a free local port.
class FakeSynonymServer {
 public:
  FakeSynonymServer() {
    server_.Get("/words", [this](const httplib::Request& req, httplib::Response& res) {
      last_query_ = req.get_param_value("ml");
      last_max_ = req.get_param_value("max");
      if (last_query_ == "broken") {
        res.status = 503;
        return;
      }
      res.set_content(R"([{"word":"low","score":10},{"word":"high","score":90},{"word":"mid","score":50},{"nope":1}])",
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeSynonymServer() {
    server_.stop();
    thread_.join();
  }
  [[nodiscard]] std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/words"; }
  std::string last_query_, last_max_;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(Thesaurus, ParsesFileInOrder) {
  const auto t = load_thesaurus(wordease::testing::test_data("mini_thesaurus.tsv"));
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.lookup("Country"), (std::vector<std::string>{"state", "nation", "land", "commonwealth", "area"}));
  EXPECT_TRUE(t.lookup("zzqx").empty());
}

TEST(Thesaurus, MalformedLineIsReported) {
  std::istringstream in("country state\n");
  try {
    parse_thesaurus(in, "x.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedLine);
  }
}

TEST(Thesaurus, BundledCountryCandidates) {
  const auto syn = bundled().synonyms.lookup("country");
  for (const auto* w : {"nation", "state", "commonwealth", "area"}) {
    EXPECT_NE(std::find(syn.begin(), syn.end(), w), syn.end()) << w;
  }
}

TEST(AlternativesFor, ResultsRespectTheThreshold) {
  const auto um = user1();
  const auto alts = alternatives_for("country", um, bundled().synonyms, 10);
  for (const auto& w : alts) {
    EXPECT_LE(*predict_word(um, w).prob, um.highlight_threshold()) << w;
    EXPECT_FALSE(um.hard_words().count(w));
    EXPECT_NE(w, "country");
  }
  // Source order is preserved among the survivors.
  const auto all = bundled().synonyms.lookup("country");
  std::size_t pos = 0;
  for (const auto& w : alts) {
    const auto it = std::find(all.begin() + static_cast<std::ptrdiff_t>(pos), all.end(), w);
    ASSERT_NE(it, all.end());
    pos = static_cast<std::size_t>(it - all.begin()) + 1;
  }
}

TEST(AlternativesFor, FiltersHardOovAndSelf) {
  const auto um = user1(1.0);  // nothing filtered by probability
  const auto src = offline_only({{"clock", {"clock", "graph", "zzqx", "watch", "timer"}}});
  EXPECT_EQ(alternatives_for("clock", um, src, 10), (std::vector<std::string>{"watch", "timer"}));
  EXPECT_EQ(alternatives_for("clock", um, src, 1), (std::vector<std::string>{"watch"}));
}

TEST(AlternativesFor, AllSynonymsHardGivesEmptyList) {
  const auto um = user1();
  const auto src = offline_only({{"clock", {"graph", "group", "green"}}});
  EXPECT_TRUE(alternatives_for("clock", um, src, 10).empty());
}

TEST(AlternativesFor, UnknownWordHasNoSynonyms) {
  try {
    alternatives_for("zzqx", user1(), bundled().synonyms, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSynonymsKnown);
  }
}

TEST(AlternativesFor, ImmutableTokensAreRefused) {
  for (const auto* w : {"NY", "64", "$", "two words"}) {
    try {
      alternatives_for(w, user1(), bundled().synonyms, 10);
      ADD_FAILURE() << w;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ImmutableToken) << w;
    }
  }
}

TEST(RemoteSynonyms, ParsesAndOrdersByScore) {
  EXPECT_EQ(parse_datamuse_response(R"([{"word":"a","score":1},{"word":"b","score":3},{"word":"c","score":3}])"),
            (std::vector<std::string>{"b", "c", "a"}));
  EXPECT_THROW(parse_datamuse_response("{"), Error);
  EXPECT_THROW(parse_datamuse_response("{}"), Error);
}

TEST(RemoteSynonyms, FetchesFromLocalServer) {
  FakeSynonymServer server;
  RemoteSynonymConfig cfg;
  cfg.enabled = true;
  cfg.endpoint = server.endpoint();
  cfg.max_results = 2;
  const auto fetch = make_remote_fetcher(cfg);
  EXPECT_EQ(fetch("Quick"), (std::vector<std::string>{"high", "mid"}));
  EXPECT_EQ(server.last_query_, "Quick");
  EXPECT_EQ(server.last_max_, "2");
  try {
    fetch("broken");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RemoteUnavailable);
  }
}

TEST(RemoteSynonyms, MergedAfterOfflineAndFailuresAreSkipped) {
  FakeSynonymServer server;
  RemoteSynonymConfig cfg;
  cfg.endpoint = server.endpoint();
  SynonymSource src = offline_only({{"quick", {"mid", "fast"}}, {"broken", {"ok"}}});
  src.remote = make_remote_fetcher(cfg);
  EXPECT_EQ(src.lookup("quick"), (std::vector<std::string>{"mid", "fast", "high", "low"}));
  EXPECT_EQ(src.lookup("broken"), (std::vector<std::string>{"ok"}));
}

TEST(RemoteSynonyms, UnreachableServerIsUnavailable) {
  RemoteSynonymConfig cfg;
  cfg.endpoint = "http://127.0.0.1:1/words";
  cfg.timeout_ms = 200;
  try {
    make_remote_fetcher(cfg)("word");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RemoteUnavailable);
  }
}

TEST(RemoteSynonyms, DisabledByDefault) {
  EXPECT_FALSE(RemoteSynonymConfig{}.enabled);
  EXPECT_FALSE(static_cast<bool>(bundled().synonyms.remote));
}
