#pragma once

// Shared fixtures and independent reference computations for the tests.

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "wordease/resources.hpp"
#include "wordease/simulator.hpp"

#ifndef WORDEASE_TEST_DATA_DIR
#define WORDEASE_TEST_DATA_DIR "tests/data"
#endif

namespace wordease::testing {

inline std::filesystem::path test_data(const std::string& name) {
  return std::filesystem::path(WORDEASE_TEST_DATA_DIR) / name;
}

/// Bundled dictionary, embedding and thesaurus, loaded once per process.
inline const LanguageResources& bundled() {
  static const LanguageResources res = load_language_resources(bundled_dict_path(), bundled_thesaurus_path());
  return res;
}

inline const std::vector<UserProfile>& bundled_profiles() {
  static const std::vector<UserProfile> profiles = load_profiles(bundled_profiles_path());
  return profiles;
}

inline const UserProfile& profile(const std::string& id) {
  for (const auto& p : bundled_profiles()) {
    if (p.id == id) return p;
  }
  throw std::out_of_range(id);
}

/// Fresh, empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("wordease-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// ---- reference computations, written without the library's helpers ----

/// Feature bag keyed the same way as the library ("G", "^ G", "F $", "^ G R").
inline std::map<std::string, double> reference_features(const std::vector<std::string>& ph, bool onset) {
  std::map<std::string, double> f;
  for (std::size_t i = 0; i < ph.size(); ++i) f[ph[i]] += 1;
  f["^ " + ph.front()] += 1;
  for (std::size_t i = 0; i + 1 < ph.size(); ++i) f[ph[i] + " " + ph[i + 1]] += 1;
  f[ph.back() + " $"] += 1;
  if (onset && ph.size() > 1) f["^ " + ph[0] + " " + ph[1]] += 1;
  return f;
}

inline double reference_cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (const auto& [k, v] : a) {
    aa += v * v;
    if (auto it = b.find(k); it != b.end()) ab += v * it->second;
  }
  for (const auto& [k, v] : b) bb += v * v;
  return ab / std::sqrt(aa * bb);
}

inline double reference_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double reference_entropy(double p) { return -p * std::log(p) / std::log(2.0) - (1 - p) * std::log(1 - p) / std::log(2.0); }

}  // namespace wordease::testing
