#pragma once

// JSON/HTTP facade over user sessions.
//
// Each session owns one immutable UserModel snapshot. Mutations for a session
// are serialised by a per-session writer lock: the new model is computed,
// written to <data_dir>/<id>.json (temp file + fsync + rename) and only then
// published and acknowledged. Readers copy the current snapshot pointer and
// never block on a writer's retraining.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "wordease/detail/http.hpp"
#include <json.hpp>

#include "wordease/alternatives.hpp"
#include "wordease/error.hpp"
#include "wordease/feedback.hpp"
#include "wordease/remote_synonyms.hpp"
#include "wordease/resources.hpp"
#include "wordease/tokenizer.hpp"

namespace wordease {

using json = nlohmann::json;

// ------------------------------------------------------------------ config

struct ServiceConfig {
  std::filesystem::path dict_path = bundled_dict_path();
  std::filesystem::path thesaurus_path = bundled_thesaurus_path();
  std::filesystem::path data_dir = "sessions";
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::size_t max_alternatives = 8;
  RemoteSynonymConfig remote;
  EmbeddingConfig embedding;
  TrainingConfig training;
};

inline ServiceConfig service_config_from_json(const json& j, const std::filesystem::path& base = {}) {
  ServiceConfig c;
  const auto path_of = [&](const char* key, std::filesystem::path& out) {
    if (!j.contains(key)) return;
    std::filesystem::path p = j.at(key).get<std::string>();
    out = p.is_relative() && !base.empty() ? base / p : p;
  };
  try {
    path_of("dict_path", c.dict_path);
    path_of("thesaurus_path", c.thesaurus_path);
    path_of("data_dir", c.data_dir);
    if (j.contains("bind_address")) c.bind_address = j.at("bind_address").get<std::string>();
    if (j.contains("port")) c.port = j.at("port").get<int>();
    if (j.contains("max_alternatives")) c.max_alternatives = j.at("max_alternatives").get<std::size_t>();
    if (j.contains("remote_synonyms")) c.remote = j.at("remote_synonyms").get<RemoteSynonymConfig>();
    if (j.contains("embedding")) c.embedding = j.at("embedding").get<EmbeddingConfig>();
    if (j.contains("training")) c.training = j.at("training").get<TrainingConfig>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("service config: ") + e.what());
  }
  return c;
}

/// WORDEASE_DICT, WORDEASE_THESAURUS, WORDEASE_DATA_DIR, WORDEASE_BIND,
/// WORDEASE_PORT and WORDEASE_REMOTE_SYNONYMS (0/1/true/false) override the
/// file. `getenv` is injectable for tests.
inline void apply_env_overrides(ServiceConfig& c,
                                const std::function<const char*(const char*)>& getenv_fn =
                                    [](const char* k) { return std::getenv(k); }) {
  if (const char* v = getenv_fn("WORDEASE_DICT")) c.dict_path = v;
  if (const char* v = getenv_fn("WORDEASE_THESAURUS")) c.thesaurus_path = v;
  if (const char* v = getenv_fn("WORDEASE_DATA_DIR")) c.data_dir = v;
  if (const char* v = getenv_fn("WORDEASE_BIND")) c.bind_address = v;
  if (const char* v = getenv_fn("WORDEASE_PORT")) {
    try {
      c.port = std::stoi(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, std::string("WORDEASE_PORT is not a number: ") + v);
    }
  }
  if (const char* v = getenv_fn("WORDEASE_REMOTE_SYNONYMS")) {
    const auto s = to_lower_ascii(v);
    c.remote.enabled = s == "1" || s == "true" || s == "yes" || s == "on";
  }
}

inline ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open service config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return service_config_from_json(j, path.parent_path());
}

// ------------------------------------------------------------- persistence

namespace detail {

inline std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string random_session_id() {
  static std::mutex m;
  static std::random_device rd;
  std::lock_guard lock(m);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (int i = 0; i < 8; ++i) {
    auto v = rd();
    for (int k = 0; k < 4; ++k, v >>= 4) id.push_back(kHex[v & 0xF]);
  }
  return id;
}

inline bool valid_session_id(std::string_view id) {
  return id.size() == 32 && id.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

/// Durable replace: write temp file, fsync, rename over the target.
inline void atomic_write(const std::filesystem::path& target, const std::string& contents) {
  const auto tmp = target.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::MissingFile, "cannot write " + tmp);
  std::size_t done = 0;
  while (done < contents.size()) {
    const auto n = ::write(fd, contents.data() + done, contents.size() - done);
    if (n < 0) {
      ::close(fd);
      throw Error(ErrorCode::MissingFile, "write failed for " + tmp);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw Error(ErrorCode::MissingFile, "fsync failed for " + tmp);
  std::filesystem::rename(tmp, target);
}

}  // namespace detail

struct SessionSnapshot {
  std::shared_ptr<const UserModel> model;
  std::string created;
  std::string updated;
};

class Session {
 public:
  Session(std::string id, std::filesystem::path path, SessionSnapshot snap)
      : id_(std::move(id)), path_(std::move(path)), snapshot_(std::move(snap)) {}

  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

  [[nodiscard]] SessionSnapshot snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
  }

  /// Runs `update` on the current model under the writer lock, persists the
  /// result, then publishes it.
  template <class F>
  SessionSnapshot mutate(F&& update) {
    std::lock_guard writer(writer_mutex_);
    const auto current = snapshot();
    SessionSnapshot next{std::make_shared<const UserModel>(update(*current.model)), current.created,
                         detail::utc_now_iso8601()};
    persist(next);
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = next;
    return next;
  }

  void persist(const SessionSnapshot& snap) const {
    const json doc = {{"format", "wordease.session"},
                      {"format_version", 1},
                      {"id", id_},
                      {"created", snap.created},
                      {"updated", snap.updated},
                      {"user_model", to_json(*snap.model)}};
    detail::atomic_write(path_, doc.dump(1));
  }

 private:
  std::string id_;
  std::filesystem::path path_;
  mutable std::mutex snapshot_mutex_;
  std::mutex writer_mutex_;
  SessionSnapshot snapshot_;
};

inline std::pair<std::string, SessionSnapshot> load_session_file(
    const std::filesystem::path& path, std::shared_ptr<const PhoneticEmbedding> embedding) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open session " + path.string());
  try {
    const auto doc = json::parse(in);
    if (doc.at("format").get<std::string>() != "wordease.session") {
      throw Error(ErrorCode::InvalidFormat, path.string() + ": not a session document");
    }
    SessionSnapshot snap;
    snap.model = std::make_shared<const UserModel>(
        user_model_from_json(doc.at("user_model"), std::move(embedding)));
    snap.created = doc.at("created").get<std::string>();
    snap.updated = doc.at("updated").get<std::string>();
    return {doc.at("id").get<std::string>(), std::move(snap)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidFormat, path.string() + ": " + e.what());
  }
}

// ----------------------------------------------------------------- service

struct ApiResponse {
  int status = 200;
  json body;
};

inline int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::NotHighlighted:
    case ErrorCode::AlreadyLabeled:
    case ErrorCode::ExhaustedPool: return 409;
    case ErrorCode::OutOfVocabulary:
    case ErrorCode::ImmutableToken:
    case ErrorCode::OverlappingSeeds:
    case ErrorCode::EmptyList:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidArgument: return 422;
    case ErrorCode::InvalidFormat: return 400;
    default: return 500;
  }
}

inline ApiResponse error_response(const Error& e) {
  return {http_status_for(e.code()), {{"error", std::string(to_string(e.code()))}, {"message", e.what()}}};
}

class Service {
 public:
  /// Loads every persisted session found in `data_dir`.
  Service(LanguageResources resources, std::filesystem::path data_dir, TrainingConfig training = {},
          std::size_t max_alternatives = 8)
      : res_(std::move(resources)),
        data_dir_(std::move(data_dir)),
        training_(training),
        max_alternatives_(max_alternatives) {
    std::filesystem::create_directories(data_dir_);
    for (const auto& entry : std::filesystem::directory_iterator(data_dir_)) {
      if (entry.path().extension() != ".json") continue;
      auto [id, snap] = load_session_file(entry.path(), res_.embedding);
      if (!detail::valid_session_id(id) || entry.path().stem() != id) {
        throw Error(ErrorCode::InvalidFormat, entry.path().string() + ": session id mismatch");
      }
      sessions_.emplace(id, std::make_shared<Session>(id, entry.path(), std::move(snap)));
    }
  }

  [[nodiscard]] std::size_t session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
  }
  [[nodiscard]] const LanguageResources& resources() const noexcept { return res_; }

  /// Current model of a session (for tests and tooling).
  [[nodiscard]] std::shared_ptr<const UserModel> user_model(const std::string& id) const {
    return find(id)->snapshot().model;
  }

  ApiResponse create_session(const json& body) {
    return guard([&] {
      const auto easy = string_list(body, "seed_easy");
      const auto hard = string_list(body, "seed_hard");
      double threshold = kDefaultHighlightThreshold;
      if (body.contains("threshold") && !body["threshold"].is_null()) threshold = number(body, "threshold");
      auto model = std::make_shared<const UserModel>(
          init_user_model(easy, hard, res_.embedding, threshold, training_));
      std::string id;
      std::shared_ptr<Session> session;
      {
        std::unique_lock lock(sessions_mutex_);
        do {
          id = detail::random_session_id();
        } while (sessions_.count(id));
        const auto now = detail::utc_now_iso8601();
        session = std::make_shared<Session>(id, data_dir_ / (id + ".json"), SessionSnapshot{model, now, now});
        session->persist(session->snapshot());
        sessions_.emplace(id, session);
      }
      return ApiResponse{201,
                         {{"id", id},
                          {"model_version", model->version()},
                          {"highlight_threshold", model->highlight_threshold()},
                          {"warnings", model->warnings()}}};
    });
  }

  ApiResponse analyze(const std::string& id, const json& body) {
    return guard([&] {
      const auto model = find(id)->snapshot().model;
      const auto text = body.is_object() && body.contains("text") ? body.at("text").get<std::string>()
                                                                  : std::string();
      json tokens = json::array();
      for (const auto& t : detect_immutable(tokenize(text))) {
        json tok = {{"text", t.text}, {"start", t.start}, {"end", t.end}, {"kind", to_string(t.kind)}};
        bool highlighted = false;
        if (t.kind == TokenKind::Word) {
          const auto pred = predict_word(*model, t.text);
          if (pred.prob) tok["prob"] = *pred.prob;
          highlighted = pred.highlighted;
        }
        tok["highlighted"] = highlighted;
        tokens.push_back(std::move(tok));
      }
      return ApiResponse{200, {{"tokens", std::move(tokens)}, {"model_version", model->version()}}};
    });
  }

  ApiResponse alternatives(const std::string& id, const std::string& word) {
    return guard([&] {
      const auto model = find(id)->snapshot().model;
      if (word.empty()) throw Error(ErrorCode::InvalidArgument, "missing 'word'");
      json out = {{"word", word}, {"model_version", model->version()}};
      try {
        out["alternatives"] = alternatives_for(word, *model, res_.synonyms, max_alternatives_);
        out["no_synonyms_known"] = false;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoSynonymsKnown) throw;
        out["alternatives"] = json::array();
        out["no_synonyms_known"] = true;
      }
      return ApiResponse{200, std::move(out)};
    });
  }

  ApiResponse implicit_feedback(const std::string& id, const json& body) {
    return guard([&] {
      const auto word = text_field(body, "word");
      const auto action = to_lower_ascii(text_field(body, "action"));
      ImplicitAction act;
      if (action == "ignore") {
        act = Ignore{};
      } else if (action == "substitute") {
        act = Substitute{text_field(body, "chosen")};
      } else {
        throw Error(ErrorCode::InvalidArgument, "action must be 'ignore' or 'substitute'");
      }
      const auto snap = find(id)->mutate(
          [&](const UserModel& um) { return apply_implicit_feedback(um, word, act); });
      return ApiResponse{200, {{"model_version", snap.model->version()}}};
    });
  }

  ApiResponse explicit_feedback(const std::string& id, const json& body) {
    return guard([&] {
      const auto word = text_field(body, "word");
      if (!body.contains("is_hard") || !body["is_hard"].is_boolean()) {
        throw Error(ErrorCode::InvalidArgument, "missing boolean 'is_hard'");
      }
      const bool is_hard = body["is_hard"].get<bool>();
      const auto snap = find(id)->mutate(
          [&](const UserModel& um) { return apply_explicit_feedback(um, word, is_hard); });
      return ApiResponse{200, {{"model_version", snap.model->version()}}};
    });
  }

  ApiResponse query(const std::string& id) {
    return guard([&] {
      const auto model = find(id)->snapshot().model;
      return ApiResponse{200, {{"word", next_query(*model)}, {"model_version", model->version()}}};
    });
  }

  ApiResponse update_preferences(const std::string& id, const json& body) {
    return guard([&] {
      std::optional<double> threshold;
      if (body.contains("threshold") && !body["threshold"].is_null()) threshold = number(body, "threshold");
      const auto add_easy = body.contains("add_easy") ? string_list(body, "add_easy") : std::vector<std::string>{};
      const auto add_hard = body.contains("add_hard") ? string_list(body, "add_hard") : std::vector<std::string>{};
      if (!threshold && add_easy.empty() && add_hard.empty()) {
        throw Error(ErrorCode::InvalidArgument, "nothing to update");
      }
      const auto snap = find(id)->mutate(
          [&](const UserModel& um) { return relabel(um, add_easy, add_hard, threshold); });
      return ApiResponse{200, {{"model_version", snap.model->version()}}};
    });
  }

  ApiResponse state(const std::string& id) {
    return guard([&] {
      const auto session = find(id);
      const auto snap = session->snapshot();
      const auto& m = *snap.model;
      return ApiResponse{200,
                         {{"id", session->id()},
                          {"created", snap.created},
                          {"updated", snap.updated},
                          {"model_version", m.version()},
                          {"highlight_threshold", m.highlight_threshold()},
                          {"easy_words", m.easy_words()},
                          {"hard_words", m.hard_words()},
                          {"embedding_ref", m.embedding_ref()}}};
    });
  }

  /// Registers the /v1 routes.
  void mount(httplib::Server& server) {
    const auto reply = [](httplib::Response& res, const ApiResponse& r) {
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    const auto with_body = [reply](const httplib::Request& req, httplib::Response& res, auto&& handler) {
      json body = json::object();
      if (!req.body.empty()) {
        try {
          body = json::parse(req.body);
        } catch (const json::parse_error& e) {
          reply(res, error_response(Error(ErrorCode::InvalidFormat, std::string("request body: ") + e.what())));
          return;
        }
      }
      if (!body.is_object()) {
        reply(res, error_response(Error(ErrorCode::InvalidFormat, "request body must be a JSON object")));
        return;
      }
      reply(res, handler(body));
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS"}});
    server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/v1/sessions", [this, with_body](const httplib::Request& req, httplib::Response& res) {
      with_body(req, res, [&](const json& b) { return create_session(b); });
    });
    server.Post(R"(/v1/sessions/([^/]+)/analyze)",
                [this, with_body](const httplib::Request& req, httplib::Response& res) {
                  with_body(req, res, [&](const json& b) { return analyze(req.matches[1], b); });
                });
    server.Get(R"(/v1/sessions/([^/]+)/alternatives)",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, alternatives(req.matches[1], req.get_param_value("word")));
               });
    server.Post(R"(/v1/sessions/([^/]+)/feedback/implicit)",
                [this, with_body](const httplib::Request& req, httplib::Response& res) {
                  with_body(req, res, [&](const json& b) { return implicit_feedback(req.matches[1], b); });
                });
    server.Post(R"(/v1/sessions/([^/]+)/feedback/explicit)",
                [this, with_body](const httplib::Request& req, httplib::Response& res) {
                  with_body(req, res, [&](const json& b) { return explicit_feedback(req.matches[1], b); });
                });
    server.Get(R"(/v1/sessions/([^/]+)/query)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, query(req.matches[1]));
    });
    server.Patch(R"(/v1/sessions/([^/]+)/preferences)",
                 [this, with_body](const httplib::Request& req, httplib::Response& res) {
                   with_body(req, res, [&](const json& b) { return update_preferences(req.matches[1], b); });
                 });
    server.Get(R"(/v1/sessions/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, state(req.matches[1]));
    });
  }

 private:
  template <class F>
  ApiResponse guard(F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      return error_response(e);
    } catch (const json::exception& e) {
      return error_response(Error(ErrorCode::InvalidFormat, e.what()));
    }
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
    return it->second;
  }

  static std::string text_field(const json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_string()) {
      throw Error(ErrorCode::InvalidArgument, std::string("missing string '") + key + "'");
    }
    return body[key].get<std::string>();
  }

  static double number(const json& body, const char* key) {
    if (!body[key].is_number()) throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a number");
    return body[key].get<double>();
  }

  static std::vector<std::string> string_list(const json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_array()) {
      throw Error(ErrorCode::InvalidArgument, std::string("missing list '") + key + "'");
    }
    std::vector<std::string> out;
    for (const auto& v : body[key]) {
      if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' must hold strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  LanguageResources res_;
  std::filesystem::path data_dir_;
  TrainingConfig training_;
  std::size_t max_alternatives_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Loads resources per `config` and serves until the process is stopped.
inline int run_server(const ServiceConfig& config, std::ostream& log = std::cerr) {
  auto res = load_language_resources(config.dict_path, config.thesaurus_path, config.embedding);
  if (config.remote.enabled) res.synonyms.remote = make_remote_fetcher(config.remote);
  Service service(std::move(res), config.data_dir, config.training, config.max_alternatives);
  httplib::Server server;
  service.mount(server);
  log << "wordease: " << service.session_count() << " session(s) loaded from " << config.data_dir.string()
      << "; listening on " << config.bind_address << ":" << config.port << std::endl;
  if (!server.listen(config.bind_address, config.port)) {
    log << "wordease: cannot bind " << config.bind_address << ":" << config.port << std::endl;
    return 1;
  }
  return 0;
}

}  // namespace wordease
