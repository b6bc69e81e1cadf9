#pragma once

// Pronouncing dictionary parsing and phoneme-count embeddings.
//
// Every word is described by three families of count features taken from its
// (stress-free) ARPAbet phoneme sequence:
//   unigrams         "AE"
//   padded bigrams   "^ G", "G R", "F $"   (sequence padded with ^ and $)
//   onset trigram    "^ G R"               (first two phonemes; optional)
// Words that sound alike share features, so cosine similarity tracks
// pronunciation similarity.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "wordease/error.hpp"
#include "wordease/sparse.hpp"

namespace wordease {

inline constexpr std::array<std::string_view, 39> kArpabet = {
    "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH", "ER", "EY",
    "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "OW", "OY",
    "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};

inline constexpr std::array<std::string_view, 15> kArpabetVowels = {
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY", "OW", "OY", "UH", "UW"};

inline bool is_arpabet(std::string_view symbol) {
  return std::find(kArpabet.begin(), kArpabet.end(), symbol) != kArpabet.end();
}

inline bool is_vowel(std::string_view symbol) {
  return std::find(kArpabetVowels.begin(), kArpabetVowels.end(), symbol) != kArpabetVowels.end();
}

inline bool is_consonant(std::string_view symbol) { return is_arpabet(symbol) && !is_vowel(symbol); }

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// "AH0" -> "AH". Returns nullopt if the remainder is not an ARPAbet symbol.
inline std::optional<std::string> strip_stress(std::string_view symbol) {
  while (!symbol.empty() && std::isdigit(static_cast<unsigned char>(symbol.back()))) {
    symbol.remove_suffix(1);
  }
  std::string upper(symbol);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (!is_arpabet(upper)) return std::nullopt;
  return upper;
}

struct PhonemeSequence {
  std::string word;
  std::vector<std::string> phonemes;

  friend bool operator==(const PhonemeSequence&, const PhonemeSequence&) = default;
};

class PronouncingDict {
 public:
  PronouncingDict() = default;
  PronouncingDict(std::map<std::string, std::vector<std::string>> entries, std::string source_path)
      : entries_(std::move(entries)), source_path_(std::move(source_path)) {}

  [[nodiscard]] const std::map<std::string, std::vector<std::string>>& entries() const noexcept {
    return entries_;
  }
  [[nodiscard]] const std::string& source_path() const noexcept { return source_path_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool contains(std::string_view word) const {
    return entries_.find(to_lower_ascii(word)) != entries_.end();
  }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::string source_path_;
};

/// Parses cmudict text: `WORD  PH1 PH2 ...`, `;;;` comments, `WORD(2)`
/// alternates (dropped). Single-space separators and trailing `# ...`
/// annotations (newer cmudict releases) are accepted too.
inline PronouncingDict parse_pronouncing_dict(std::istream& in, std::string source_path) {
  std::map<std::string, std::vector<std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(";;;", 0) == 0) continue;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;  // blank

    std::vector<std::string> phonemes;
    std::string symbol;
    while (fields >> symbol) {
      auto stripped = strip_stress(symbol);
      if (!stripped) {
        throw Error(ErrorCode::MalformedLine, source_path + ":" + std::to_string(line_no) +
                                                  ": unknown phoneme '" + symbol + "'");
      }
      phonemes.push_back(std::move(*stripped));
    }
    if (phonemes.empty()) {
      throw Error(ErrorCode::MalformedLine,
                  source_path + ":" + std::to_string(line_no) + ": no phonemes for '" + word + "'");
    }
    if (word.size() > 3 && word.back() == ')') {
      const auto open = word.rfind('(');
      if (open != std::string::npos && open > 0 &&
          std::all_of(word.begin() + static_cast<std::ptrdiff_t>(open) + 1, word.end() - 1,
                      [](unsigned char c) { return std::isdigit(c); })) {
        continue;  // alternate pronunciation
      }
    }
    entries.emplace(to_lower_ascii(word), std::move(phonemes));
  }
  if (entries.empty()) throw Error(ErrorCode::EmptyDictionary, source_path + ": no entries");
  return PronouncingDict(std::move(entries), std::move(source_path));
}

inline PronouncingDict load_pronouncing_dict(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open pronouncing dictionary " + path.string());
  return parse_pronouncing_dict(in, path.string());
}

inline PhonemeSequence phonemes_of(const PronouncingDict& dict, std::string_view word) {
  const auto key = to_lower_ascii(word);
  const auto it = dict.entries().find(key);
  if (it == dict.entries().end()) throw Error(ErrorCode::OutOfVocabulary, "'" + key + "'");
  return {key, it->second};
}

struct EmbeddingConfig {
  bool use_projection = false;
  int dimensions = 64;  // only read when use_projection
  bool onset_trigram = true;

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

inline void to_json(nlohmann::json& j, const EmbeddingConfig& c) {
  j = {{"use_projection", c.use_projection},
       {"dimensions", c.dimensions},
       {"onset_trigram", c.onset_trigram}};
}

inline void from_json(const nlohmann::json& j, EmbeddingConfig& c) {
  c = EmbeddingConfig{};
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "embedding config must be an object");
  try {
    if (j.contains("use_projection")) c.use_projection = j.at("use_projection").get<bool>();
    if (j.contains("dimensions")) c.dimensions = j.at("dimensions").get<int>();
    if (j.contains("onset_trigram")) c.onset_trigram = j.at("onset_trigram").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("embedding config: ") + e.what());
  }
  if (c.use_projection && c.dimensions <= 0) {
    throw Error(ErrorCode::InvalidConfig, "embedding config: dimensions must be positive");
  }
}

inline EmbeddingConfig load_embedding_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open embedding config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return j.get<EmbeddingConfig>();
}

/// Feature keys of one phoneme sequence, with multiplicity.
inline std::map<std::string, int> phoneme_features(const std::vector<std::string>& phonemes,
                                                   bool onset_trigram) {
  std::map<std::string, int> counts;
  for (const auto& p : phonemes) ++counts[p];
  std::string prev = "^";
  for (const auto& p : phonemes) {
    ++counts[prev + " " + p];
    prev = p;
  }
  ++counts[prev + " $"];
  if (onset_trigram && phonemes.size() >= 2) ++counts["^ " + phonemes[0] + " " + phonemes[1]];
  return counts;
}

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

struct Neighbor {
  std::string word;
  double similarity;
};

/// Immutable word -> feature-vector table. Rows are stored sparse (CSR); with
/// projection enabled every row is dense of length `dimension()`.
class PhoneticEmbedding {
 public:
  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }
  [[nodiscard]] const std::vector<std::string>& words() const noexcept { return words_; }
  [[nodiscard]] const std::map<std::string, std::uint32_t>& feature_index() const noexcept {
    return feature_index_;
  }
  [[nodiscard]] const EmbeddingConfig& config() const noexcept { return config_; }
  /// Stable hex digest of (dictionary contents, config).
  [[nodiscard]] const std::string& fingerprint() const noexcept { return fingerprint_; }

  [[nodiscard]] std::optional<std::uint32_t> row_of(std::string_view word) const {
    const auto it = row_of_.find(to_lower_ascii(word));
    if (it == row_of_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] bool contains(std::string_view word) const { return row_of(word).has_value(); }

  [[nodiscard]] SparseView row(std::uint32_t r) const noexcept {
    const auto begin = offsets_[r];
    const auto end = offsets_[r + 1];
    return {std::span<const std::uint32_t>(indices_).subspan(begin, end - begin),
            std::span<const double>(values_).subspan(begin, end - begin)};
  }

  /// Sparse vector of a word; throws OutOfVocabulary.
  [[nodiscard]] SparseView vector_of(std::string_view word) const {
    const auto r = row_of(word);
    if (!r) throw Error(ErrorCode::OutOfVocabulary, "'" + to_lower_ascii(word) + "'");
    return row(*r);
  }

 private:
  friend PhoneticEmbedding build_embedding(const PronouncingDict&, const EmbeddingConfig&);

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> row_of_;
  std::map<std::string, std::uint32_t> feature_index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::size_t dimension_ = 0;
  EmbeddingConfig config_;
  std::string fingerprint_;
};

namespace detail {

// Rank-k truncation of the uncentred count matrix: rows are mapped onto the
// top-k right singular vectors, i.e. eigenvectors of X^T X.
inline Eigen::MatrixXd top_right_singular_vectors(const PhoneticEmbedding& e, std::size_t raw_dim,
                                                  std::size_t k) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(raw_dim),
                                               static_cast<Eigen::Index>(raw_dim));
  for (std::uint32_t r = 0; r < e.size(); ++r) {
    const auto v = e.row(r);
    for (std::size_t a = 0; a < v.nnz(); ++a) {
      for (std::size_t b = 0; b < v.nnz(); ++b) {
        gram(v.indices[a], v.indices[b]) += v.values[a] * v.values[b];
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidConfig, "projection: eigen decomposition failed");
  }
  const auto n = static_cast<Eigen::Index>(raw_dim);
  Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(k));
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - c);  // eigenvalues ascend
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0) v = -v;  // fix sign so the basis is reproducible
    basis.col(c) = v;
  }
  return basis;
}

}  // namespace detail

inline PhoneticEmbedding build_embedding(const PronouncingDict& dict,
                                         const EmbeddingConfig& config = {}) {
  if (dict.size() == 0) throw Error(ErrorCode::EmptyDictionary, "cannot embed an empty dictionary");

  PhoneticEmbedding e;
  e.config_ = config;

  std::vector<std::map<std::string, int>> features;
  features.reserve(dict.size());
  std::set<std::string> keys;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  hash = detail::fnv1a(hash, config.onset_trigram ? "onset:1;" : "onset:0;");
  if (config.use_projection) hash = detail::fnv1a(hash, "proj:" + std::to_string(config.dimensions) + ";");
  for (const auto& [word, phonemes] : dict.entries()) {
    e.row_of_.emplace(word, static_cast<std::uint32_t>(e.words_.size()));
    e.words_.push_back(word);
    features.push_back(phoneme_features(phonemes, config.onset_trigram));
    for (const auto& [key, count] : features.back()) keys.insert(key);
    hash = detail::fnv1a(hash, word);
    for (const auto& p : phonemes) hash = detail::fnv1a(detail::fnv1a(hash, " "), p);
    hash = detail::fnv1a(hash, "\n");
  }

  std::uint32_t next = 0;
  for (const auto& key : keys) e.feature_index_.emplace(key, next++);
  const std::unordered_map<std::string, std::uint32_t> lookup(e.feature_index_.begin(),
                                                              e.feature_index_.end());
  for (const auto& counts : features) {
    std::vector<std::pair<std::uint32_t, double>> row;
    row.reserve(counts.size());
    for (const auto& [key, count] : counts) row.emplace_back(lookup.at(key), count);
    std::sort(row.begin(), row.end());
    for (const auto& [idx, val] : row) {
      e.indices_.push_back(idx);
      e.values_.push_back(val);
    }
    e.offsets_.push_back(e.indices_.size());
  }
  e.dimension_ = keys.size();

  if (config.use_projection) {
    const auto k = static_cast<std::size_t>(config.dimensions);
    if (k > e.dimension_) {
      throw Error(ErrorCode::InvalidConfig, "projection dimensions " + std::to_string(k) +
                                                " exceed raw feature count " +
                                                std::to_string(e.dimension_));
    }
    const Eigen::MatrixXd basis = detail::top_right_singular_vectors(e, e.dimension_, k);
    std::vector<std::size_t> offsets{0};
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    indices.reserve(e.size() * k);
    values.reserve(e.size() * k);
    for (std::uint32_t r = 0; r < e.size(); ++r) {
      const auto v = e.row(r);
      Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
      for (std::size_t a = 0; a < v.nnz(); ++a) {
        y += v.values[a] * basis.row(v.indices[a]).transpose();
      }
      for (std::size_t c = 0; c < k; ++c) {
        indices.push_back(static_cast<std::uint32_t>(c));
        values.push_back(y(static_cast<Eigen::Index>(c)));
      }
      offsets.push_back(indices.size());
    }
    e.offsets_ = std::move(offsets);
    e.indices_ = std::move(indices);
    e.values_ = std::move(values);
    e.dimension_ = k;
  }

  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << hash;
  e.fingerprint_ = hex.str();
  return e;
}

/// Dense copy of a word's vector (length == dimension()).
inline std::vector<double> embed(const PhoneticEmbedding& embedding, std::string_view word) {
  const auto v = embedding.vector_of(word);
  std::vector<double> dense(embedding.dimension(), 0.0);
  v.axpy(1.0, dense);
  return dense;
}

inline double similarity(const PhoneticEmbedding& embedding, std::string_view a, std::string_view b) {
  return cosine(embedding.vector_of(a), embedding.vector_of(b));
}

/// k most cosine-similar words (query excluded), similarity descending,
/// ties by word. k is clamped to size()-1.
inline std::vector<Neighbor> nearest_neighbors(const PhoneticEmbedding& embedding,
                                               std::string_view word, std::size_t k) {
  const auto query_row = embedding.row_of(word);
  if (!query_row) throw Error(ErrorCode::OutOfVocabulary, "'" + to_lower_ascii(word) + "'");
  if (k == 0) throw Error(ErrorCode::OutOfRange, "k must be positive");
  const auto query = embedding.row(*query_row);

  std::vector<Neighbor> all;
  all.reserve(embedding.size());
  for (std::uint32_t r = 0; r < embedding.size(); ++r) {
    if (r == *query_row) continue;
    all.push_back({embedding.words()[r], cosine(query, embedding.row(r))});
  }
  k = std::min(k, all.size());
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.word < b.word;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), better);
  all.resize(k);
  return all;
}

}  // namespace wordease
