#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace conceptsearch {

struct TaggedItem {
  std::string id;
  std::string title;
  std::string description;
  std::vector<std::string> tags;
  std::string owner;
  std::vector<std::string> communities;

  friend bool operator==(const TaggedItem&, const TaggedItem&) = default;
};

struct Community {
  std::string id;
  std::string title;
  std::string description;
  std::int64_t member_count = 0;
  std::vector<std::string> item_ids;

  friend bool operator==(const Community&, const Community&) = default;
};

struct Provenance {
  std::vector<std::string> sources;
  std::string loaded_at;  // ISO-8601 UTC
};

// Items and communities keyed by id. Immutable once loaded; safe to share
// across query threads.
struct Corpus {
  std::map<std::string, TaggedItem> items;
  std::map<std::string, Community> communities;
  Provenance provenance;
};

struct CorpusStats {
  std::size_t item_count = 0;
  std::size_t user_count = 0;
  std::size_t community_count = 0;
  // number of communities an item belongs to -> number of items
  std::map<std::size_t, std::size_t> communities_per_item;
  double zero_community_fraction = 0.0;
};

struct Violation {
  enum class Kind {
    empty_id,
    dangling_community,
    dangling_item,
    negative_member_count,
    membership_mismatch,
  };
  Kind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  // Off: item.communities and community.item_ids are reconciled by union.
  // On: any disagreement between the two directions is a load error.
  bool strict_membership = false;
};

// Reads the two line-delimited JSON files. Tags are normalized (lowercase,
// NFC, trimmed, empties dropped). Throws CorpusError on unreadable files,
// malformed records (with line number), duplicate ids, or any validation
// violation such as a dangling reference.
Corpus load_corpus(const std::filesystem::path& items_path,
                   const std::filesystem::path& communities_path,
                   const LoadOptions& options = {});

void save_corpus(const Corpus& corpus, const std::filesystem::path& items_path,
                 const std::filesystem::path& communities_path);

// Applies tag normalization and union reconciliation to an in-memory corpus.
void normalize_corpus(Corpus& corpus);

ValidationReport validate(const Corpus& corpus);

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace conceptsearch
