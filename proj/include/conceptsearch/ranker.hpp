#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "conceptsearch/concept.hpp"
#include "conceptsearch/index.hpp"

namespace conceptsearch {

struct RankerConfig {
  Mode mode = Mode::community;
  double lambda = 0.5;
  double alpha = 1.0;
  std::size_t top_concepts = 10;
  std::size_t k = 10;
  // Items shown per concept group.
  std::size_t group_items = 5;
};

// Throws std::invalid_argument unless lambda, alpha in [0,1] and
// top_concepts, k >= 1.
void check(const RankerConfig& cfg);

struct Contribution {
  std::string concept_id;
  // P(Q|C) * P(C) * P(I|C,Q)
  double term = 0.0;
};

struct RankedHit {
  std::string item_id;
  double score = 0.0;
  std::vector<Contribution> contributions;
};

struct ScoredConcept {
  const Concept* entry = nullptr;
  double query_score = 0.0;    // P(Q|C)
  double concept_score = 0.0;  // P(Q|C) * P(C)
};

struct ConceptGroup {
  std::string concept_id;
  std::vector<std::string> label;
  double query_score = 0.0;
  double popularity = 0.0;
  double concept_score = 0.0;
  // (item, P(I|C,Q)), best first.
  std::vector<ScoredItem> items;
};

// Concepts with nonzero P(Q|C), best `top` by P(Q|C) * P(C), ties by id.
std::vector<ScoredConcept> select_concepts(const QuerySpec& query,
                                           std::span<const Concept> concepts, std::size_t top);

// P(I|C,Q) for either concept kind: the lambda mixture for community
// concepts, member-only cosine for cluster concepts.
double item_score(const std::string& item_id, const Concept& cpt,
                  const ItemVectorIndex& index, double lambda);

// Items a concept may contribute to.
std::vector<std::string> concept_candidates(const Concept& cpt, const ItemVectorIndex& index,
                                            const QuerySpec& query);

// Sums P(Q|C) * P(C) * P(I|C,Q) over the selected concepts for every
// candidate item. The 1/P(Q) factor is rank-constant and omitted. Best
// cfg.k first, ties by item id; items scoring 0 are dropped.
std::vector<RankedHit> rank(const QuerySpec& query, std::span<const ScoredConcept> selected,
                            const RankerConfig& cfg, const ItemVectorIndex& index);
std::vector<RankedHit> rank(const QuerySpec& query, std::span<const Concept> concepts,
                            const RankerConfig& cfg, const ItemVectorIndex& index);

// ceil(alpha * n) slots from concept_hits, the rest from plain_hits,
// skipping duplicates; a short concept list is backfilled from plain_hits.
std::vector<RankedHit> blend_alpha(std::span<const RankedHit> concept_hits,
                                   std::span<const RankedHit> plain_hits, double alpha,
                                   std::size_t n);

std::vector<ConceptGroup> group_by_concept(const QuerySpec& query,
                                           std::span<const ScoredConcept> selected,
                                           const RankerConfig& cfg, const ItemVectorIndex& index);
std::vector<ConceptGroup> group_by_concept(const QuerySpec& query,
                                           std::span<const Concept> concepts,
                                           const RankerConfig& cfg, const ItemVectorIndex& index);

}  // namespace conceptsearch
