#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "conceptsearch/concept.hpp"
#include "conceptsearch/corpus.hpp"
#include "conceptsearch/index.hpp"

namespace conceptsearch {

struct CommunityVector {
  std::string community_id;
  // Unit-sum tag distribution after trimming; empty for an empty pool.
  TermVector vector;
  // Tag occurrences summed over the pool, before trimming.
  std::int64_t raw_tag_total = 0;
  std::size_t image_count = 0;
  std::int64_t member_count = 0;
  // Pool item ids, ascending.
  std::vector<std::string> item_ids;
};

struct CommunityConceptOptions {
  // Counts below mean - trim_sd * stddev are dropped.
  double trim_sd = 2.0;
  // Leader-cosine required to join an existing concept.
  double sim_threshold = 0.9;
};

// Removes terms whose count is below mean - num_sd * stddev (population
// standard deviation over the entries). Never removes every entry.
std::map<std::string, double> trim_low_frequency(const std::map<std::string, double>& raw_counts,
                                                 double num_sd = 2.0);

// Sums raw tag counts over the community pool, trims outliers and normalizes
// to unit sum. Pool items missing from the index are an error.
CommunityVector build_community_vector(const Community& community,
                                       const ItemVectorIndex& index, double trim_sd = 2.0);

// Leader clustering: communities are visited by descending member_count
// (ties by id); each joins the first concept whose leader vector has cosine
// >= sim_threshold with it, else it founds a new concept. Empty vectors are
// skipped.
std::vector<Concept> merge_communities(std::span<const CommunityVector> vectors,
                                       double sim_threshold = 0.9);

struct CommunityConcepts {
  std::vector<CommunityVector> vectors;
  std::vector<Concept> concepts;
  // Communities whose pool produced no tags; excluded from concepts.
  std::vector<std::string> empty_communities;
};

CommunityConcepts build_community_concepts(const Corpus& corpus, const ItemVectorIndex& index,
                                           const CommunityConceptOptions& options = {});

// P(Q|C): cosine between the concept distribution and a unit-weight query.
double concept_query_score(const Concept& cpt, const QuerySpec& query);
double concept_query_score(const Concept& cpt, const TermVector& unit_query);

// P(I|C,Q) = lambda * membership + (1 - lambda) * cosine(item, concept).
double item_concept_score(const TermVector& item_vector, bool is_member, const Concept& cpt,
                          double lambda = 0.5);
double item_concept_score(const std::string& item_id, const ItemVectorIndex& index,
                          const Concept& cpt, double lambda = 0.5);

// Concept pool plus every item matching at least one query term, ascending.
std::vector<std::string> candidate_items(const Concept& cpt, const ItemVectorIndex& index,
                                         const QuerySpec& query);

}  // namespace conceptsearch
