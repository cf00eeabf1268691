#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conceptsearch/corpus.hpp"
#include "conceptsearch/term_vector.hpp"

namespace conceptsearch {

enum class Mode { plain, cluster, community };

std::string_view to_string(Mode mode);
// Throws std::invalid_argument for unknown names.
Mode parse_mode(std::string_view name);

struct QuerySpec {
  std::string raw;
  std::vector<std::string> terms;
  Mode mode = Mode::community;
  std::size_t k = 10;
  double alpha = 1.0;
  std::size_t top_concepts = 10;
};

// Tokenizes `raw` and checks k >= 1, alpha in [0,1], top_concepts >= 1 and
// at least one term. Throws std::invalid_argument otherwise.
QuerySpec make_query(std::string_view raw, Mode mode = Mode::community,
                     std::size_t k = 10, double alpha = 1.0,
                     std::size_t top_concepts = 10);

struct IndexOptions {
  bool title = true;
  bool description = true;
  // Term frequency multiplier for tag occurrences relative to text fields.
  double tag_boost = 2.0;

  friend bool operator==(const IndexOptions&, const IndexOptions&) = default;
};

/// TF-IDF item vectors plus an inverted index.
///
/// Documents are numbered in ascending item-id order. Item weights are
/// tf(t) * idf(t) with idf(t) = ln(N / df(t)) + 1, where tag occurrences
/// count `tag_boost` times toward tf.
class ItemVectorIndex {
 public:
  using DocId = std::uint32_t;

  ItemVectorIndex() = default;

  static ItemVectorIndex build(const Corpus& corpus, const IndexOptions& options = {});

  // Reassembles an index from persisted vectors; recomputes postings and
  // document frequencies. `ids` must be strictly ascending.
  static ItemVectorIndex from_parts(std::vector<std::string> ids,
                                    std::vector<TermVector> vectors,
                                    std::vector<TermVector> tag_counts,
                                    const IndexOptions& options);

  std::size_t item_count() const { return ids_.size(); }
  const std::vector<std::string>& item_ids() const { return ids_; }
  const std::string& item_id(DocId doc) const { return ids_[doc]; }
  std::optional<DocId> doc_of(std::string_view item_id) const;

  const TermVector& vector(DocId doc) const { return vectors_[doc]; }
  // Raw tag occurrence counts (no boost, no idf).
  const TermVector& tag_counts(DocId doc) const { return tag_counts_[doc]; }

  std::span<const DocId> postings(std::string_view term) const;
  std::size_t doc_freq(std::string_view term) const;
  // 0 for terms absent from the index.
  double idf(std::string_view term) const;
  const std::map<std::string, std::vector<DocId>, std::less<>>& all_postings() const {
    return postings_;
  }

  // Query terms weighted tf * idf; terms absent from the index are dropped.
  TermVector query_vector(std::span<const std::string> terms) const;
  // Ascending union of the postings of every query term.
  std::vector<DocId> matching_docs(std::span<const std::string> terms) const;

  const IndexOptions& options() const { return options_; }

 private:
  void rebuild_postings();

  IndexOptions options_;
  std::vector<std::string> ids_;
  std::vector<TermVector> vectors_;
  std::vector<TermVector> tag_counts_;
  std::map<std::string, std::vector<DocId>, std::less<>> postings_;
};

struct ScoredItem {
  std::string item_id;
  double score = 0.0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

// Orders by score descending, then item id ascending.
bool ranks_before(const ScoredItem& a, const ScoredItem& b);

// TF-IDF cosine between the query and every item in the union of the query
// terms' postings; best `k` first, ties by ascending id.
std::vector<ScoredItem> plain_search(const ItemVectorIndex& index,
                                     std::span<const std::string> terms, std::size_t k);

inline std::vector<ScoredItem> plain_search(const ItemVectorIndex& index,
                                            const QuerySpec& query, std::size_t k) {
  return plain_search(index, query.terms, k);
}

}  // namespace conceptsearch
