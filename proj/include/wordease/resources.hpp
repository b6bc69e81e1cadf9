#pragma once

#include <filesystem>
#include <memory>

#include "wordease/alternatives.hpp"
#include "wordease/phonetics.hpp"

#ifndef WORDEASE_DEFAULT_DATA_DIR
#define WORDEASE_DEFAULT_DATA_DIR "data"
#endif

namespace wordease {

/// Directory holding the bundled dictionary, thesaurus, corpus and profiles.
inline std::filesystem::path bundled_data_dir() { return WORDEASE_DEFAULT_DATA_DIR; }
inline std::filesystem::path bundled_dict_path() { return bundled_data_dir() / "cmudict-0.7b.txt"; }
inline std::filesystem::path bundled_thesaurus_path() { return bundled_data_dir() / "thesaurus.tsv"; }
inline std::filesystem::path bundled_corpus_path() { return bundled_data_dir() / "corpus.txt"; }
inline std::filesystem::path bundled_profiles_path() { return bundled_data_dir() / "profiles.json"; }

/// Read-only data shared by every session / simulation run.
struct LanguageResources {
  std::shared_ptr<const PronouncingDict> dict;
  std::shared_ptr<const PhoneticEmbedding> embedding;
  SynonymSource synonyms;
};

inline LanguageResources load_language_resources(const std::filesystem::path& dict_path,
                                                 const std::filesystem::path& thesaurus_path,
                                                 const EmbeddingConfig& embedding_config = {}) {
  LanguageResources res;
  res.dict = std::make_shared<const PronouncingDict>(load_pronouncing_dict(dict_path));
  res.embedding = std::make_shared<const PhoneticEmbedding>(build_embedding(*res.dict, embedding_config));
  if (!thesaurus_path.empty()) {
    res.synonyms.offline = std::make_shared<const Thesaurus>(load_thesaurus(thesaurus_path));
  }
  return res;
}

}  // namespace wordease
