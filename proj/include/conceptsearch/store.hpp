#pragma once

#include <filesystem>
#include <stdexcept>

#include "conceptsearch/engine.hpp"

namespace conceptsearch {

// On-disk layout of an index directory (format version 1):
//
//   manifest.json      {"format": "conceptsearch-index", "version": 1,
//                       "created", "sources", "index_options",
//                       "concept_options", "counts"}
//   items.jsonl        normalized corpus items, one JSON object per line
//   communities.jsonl  reconciled communities, one JSON object per line
//   vectors.jsonl      {"id", "tfidf": [[term, weight]...],
//                       "tags": [[tag, count]...]} in ascending id order
//   concepts.jsonl     {"id", "kind", "label", "vector", "popularity",
//                       "member_count", "sources", "members"}
//
// Postings and document frequencies are rebuilt from vectors.jsonl on load.
inline constexpr int kIndexFormatVersion = 1;

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void save_index(const SearchEngine& engine, const std::filesystem::path& dir);

// Throws StoreError when the directory is missing, the manifest has another
// format version, or any file is malformed.
SearchEngine open_index(const std::filesystem::path& dir);

}  // namespace conceptsearch
