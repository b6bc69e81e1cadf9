#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wordease/error.hpp"
#include "wordease/feedback.hpp"
#include "wordease/tokenizer.hpp"

namespace wordease {

/// word -> synonyms in relevance order.
class Thesaurus {
 public:
  Thesaurus() = default;
  explicit Thesaurus(std::unordered_map<std::string, std::vector<std::string>> entries)
      : entries_(std::move(entries)) {}

  [[nodiscard]] const std::vector<std::string>& lookup(std::string_view word) const {
    static const std::vector<std::string> kNone;
    const auto it = entries_.find(to_lower_ascii(word));
    return it == entries_.end() ? kNone : it->second;
  }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

/// `word<TAB>syn1,syn2,...` per line; blank lines and `#` comments skipped.
inline Thesaurus parse_thesaurus(std::istream& in, const std::string& source) {
  std::unordered_map<std::string, std::vector<std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::MalformedLine, source + ":" + std::to_string(line_no) +
                                                ": expected word<TAB>synonyms");
    }
    auto& syns = entries[to_lower_ascii(line.substr(0, tab))];
    std::size_t pos = tab + 1;
    while (pos <= line.size()) {
      auto comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      auto syn = to_lower_ascii(line.substr(pos, comma - pos));
      if (!syn.empty() && std::find(syns.begin(), syns.end(), syn) == syns.end()) {
        syns.push_back(std::move(syn));
      }
      pos = comma + 1;
    }
  }
  return Thesaurus(std::move(entries));
}

inline Thesaurus load_thesaurus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open thesaurus " + path.string());
  return parse_thesaurus(in, path.string());
}

/// Fetches synonyms from a remote service. Throws Error(RemoteUnavailable)
/// on transport or protocol failure.
using RemoteSynonymFetcher = std::function<std::vector<std::string>(const std::string&)>;

struct SynonymSource {
  std::shared_ptr<const Thesaurus> offline;
  RemoteSynonymFetcher remote;  // empty: remote lookups disabled

  /// Offline synonyms first, then remote ones not already present. A failing
  /// remote is skipped.
  [[nodiscard]] std::vector<std::string> lookup(std::string_view word) const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    const auto add = [&](const std::string& w) {
      auto key = to_lower_ascii(w);
      if (seen.insert(key).second) out.push_back(std::move(key));
    };
    if (offline) {
      for (const auto& s : offline->lookup(word)) add(s);
    }
    if (remote) {
      try {
        for (const auto& s : remote(to_lower_ascii(word))) add(s);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RemoteUnavailable) throw;
      }
    }
    return out;
  }
};

/// Throws ImmutableToken unless `word` is a single plain WORD token.
inline void require_mutable_word(std::string_view word) {
  const auto tokens = detect_immutable(tokenize(word));
  if (tokens.size() != 1 || tokens.front().kind != TokenKind::Word) {
    throw Error(ErrorCode::ImmutableToken,
                "'" + std::string(word) + "' is a name, number or symbol and is kept as written");
  }
}

/// Synonyms of `word` that the user is predicted to find easy: in the
/// vocabulary, not hard-listed, and P(hard) <= the user's highlight threshold.
/// Source order is preserved. Throws NoSynonymsKnown when the source has
/// nothing for the word; an empty result means every synonym was filtered.
inline std::vector<std::string> alternatives_for(std::string_view word, const UserModel& um,
                                                 const SynonymSource& source, std::size_t max_n) {
  require_mutable_word(word);
  const auto key = to_lower_ascii(word);
  const auto candidates = source.lookup(key);
  if (candidates.empty()) throw Error(ErrorCode::NoSynonymsKnown, "no synonyms for '" + key + "'");
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    if (out.size() >= max_n) break;
    if (c == key || um.hard_words().count(c)) continue;
    const auto row = um.embedding().row_of(c);
    if (!row) continue;
    if (prob_hard(um.model(), um.embedding().row(*row)) > um.highlight_threshold()) continue;
    out.push_back(c);
  }
  return out;
}

}  // namespace wordease
