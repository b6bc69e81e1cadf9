#pragma once

// DataMuse-compatible synonym client: GET <endpoint>?ml=<word>&max=<n>,
// response is a JSON array of {"word": ..., "score": ...}.

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "wordease/detail/http.hpp"
#include <json.hpp>

#include "wordease/alternatives.hpp"
#include "wordease/error.hpp"

namespace wordease {

struct RemoteSynonymConfig {
  bool enabled = false;
  std::string endpoint = "https://api.datamuse.com/words";
  int timeout_ms = 1500;
  int max_results = 20;
};

inline void from_json(const nlohmann::json& j, RemoteSynonymConfig& c) {
  c = RemoteSynonymConfig{};
  if (j.contains("enabled")) c.enabled = j.at("enabled").get<bool>();
  if (j.contains("endpoint")) c.endpoint = j.at("endpoint").get<std::string>();
  if (j.contains("timeout_ms")) c.timeout_ms = j.at("timeout_ms").get<int>();
  if (j.contains("max_results")) c.max_results = j.at("max_results").get<int>();
}

inline void to_json(nlohmann::json& j, const RemoteSynonymConfig& c) {
  j = {{"enabled", c.enabled},
       {"endpoint", c.endpoint},
       {"timeout_ms", c.timeout_ms},
       {"max_results", c.max_results}};
}

/// Words of a DataMuse-style response, highest score first (stable for ties).
inline std::vector<std::string> parse_datamuse_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::RemoteUnavailable, std::string("bad synonym response: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::RemoteUnavailable, "synonym response is not an array");
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("word") || !item["word"].is_string()) continue;
    const double score = item.contains("score") && item["score"].is_number()
                             ? item["score"].get<double>()
                             : 0.0;
    scored.emplace_back(score, item["word"].get<std::string>());
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (auto& [score, word] : scored) out.push_back(std::move(word));
  return out;
}

/// Fetcher for SynonymSource::remote.
inline RemoteSynonymFetcher make_remote_fetcher(const RemoteSynonymConfig& config) {
  const auto scheme_end = config.endpoint.find("://");
  const auto host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_begin = config.endpoint.find('/', host_begin);
  const std::string base =
      path_begin == std::string::npos ? config.endpoint : config.endpoint.substr(0, path_begin);
  const std::string path = path_begin == std::string::npos ? "/" : config.endpoint.substr(path_begin);
  const auto timeout = std::chrono::milliseconds(config.timeout_ms);
  const int max_results = config.max_results;

  return [base, path, timeout, max_results](const std::string& word) {
    httplib::Result res;
    try {
      // throws std::invalid_argument for https when built without TLS support
      httplib::Client client(base);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      const httplib::Params params{{"ml", word}, {"max", std::to_string(max_results)}};
      res = client.Get(path, params, httplib::Headers{});
    } catch (const std::exception& e) {
      throw Error(ErrorCode::RemoteUnavailable, std::string("synonym client: ") + e.what());
    }
    if (!res) {
      throw Error(ErrorCode::RemoteUnavailable,
                  "synonym service unreachable: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::RemoteUnavailable,
                  "synonym service returned HTTP " + std::to_string(res->status));
    }
    auto words = parse_datamuse_response(res->body);
    if (words.size() > static_cast<std::size_t>(max_results)) words.resize(max_results);
    return words;
  };
}

}  // namespace wordease
