#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "conceptsearch/cluster_concepts.hpp"
#include "conceptsearch/community_concepts.hpp"
#include "conceptsearch/corpus.hpp"
#include "conceptsearch/index.hpp"
#include "conceptsearch/ranker.hpp"

namespace conceptsearch {

struct SearchParams {
  std::string q;
  Mode mode = Mode::community;
  std::size_t k = 10;
  double alpha = 1.0;
  double lambda = 0.5;
  std::size_t top_concepts = 10;
  bool grouped = false;
  ClusterOptions cluster;
  // Community mode only: when no selected concept reaches
  // `popularity_floor` members, alpha drops to 0 and plain search answers.
  bool adaptive_alpha = true;
  std::int64_t popularity_floor = 10;
};

struct ConceptSummary {
  std::string id;
  std::vector<std::string> label;
  double query_score = 0.0;
  double popularity = 0.0;
  double concept_score = 0.0;
  std::int64_t member_count = 0;
  std::size_t item_count = 0;
};

struct SearchResult {
  QuerySpec query;
  double lambda = 0.5;
  double alpha_used = 1.0;
  // False when a concept mode found no concept relevant to the query, or
  // plain search matched nothing.
  bool answerable = false;
  // Items with a nonzero score before truncation to k.
  std::size_t total_candidates = 0;
  std::vector<ConceptSummary> concepts;
  std::vector<RankedHit> hits;
  std::vector<ConceptGroup> groups;
};

// Corpus, index and offline community concepts bundled for querying.
// Immutable after construction; search() is safe to call concurrently.
class SearchEngine {
 public:
  SearchEngine(Corpus corpus, const IndexOptions& index_options = {},
               const CommunityConceptOptions& concept_options = {});
  SearchEngine(Corpus corpus, ItemVectorIndex index, std::vector<Concept> concepts,
               const CommunityConceptOptions& concept_options);

  // Throws std::invalid_argument for bad parameters (empty query, k = 0,
  // alpha or lambda outside [0,1]).
  SearchResult search(const SearchParams& params) const;

  // Concepts for a query ranked by P(Q|C) * P(C).
  std::vector<ConceptSummary> concepts_for(const SearchParams& params) const;

  const Corpus& corpus() const { return corpus_; }
  const ItemVectorIndex& index() const { return index_; }
  const std::vector<Concept>& community_concepts() const { return concepts_; }
  const std::vector<CommunityVector>& community_vectors() const { return vectors_; }
  const CommunityConceptOptions& concept_options() const { return concept_options_; }
  CorpusStats stats() const { return corpus_stats(corpus_); }

 private:
  Corpus corpus_;
  ItemVectorIndex index_;
  CommunityConceptOptions concept_options_;
  std::vector<CommunityVector> vectors_;
  std::vector<Concept> concepts_;
};

}  // namespace conceptsearch
