#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conceptsearch/term_vector.hpp"

namespace conceptsearch {

enum class ConceptKind { community, cluster };

// A latent query meaning: either a merge of near-identical communities or a
// query-time cluster of matching items.
struct Concept {
  std::string id;
  ConceptKind kind = ConceptKind::community;
  // Three highest-weight terms of `vector`, ties lexicographic.
  std::vector<std::string> label;
  // Unit-sum term distribution.
  TermVector vector;
  // Query-independent prior. ln(1 + members) for community concepts, cluster
  // size for cluster concepts.
  double popularity = 0.0;
  // Community concepts: (community id, weight) with the leader first; weights
  // are proportional to each community's image count and sum to 1.
  std::vector<std::pair<std::string, double>> source_communities;
  // Sum of member_count over merged communities (0 for clusters).
  std::int64_t member_count = 0;
  // Sorted ascending.
  std::vector<std::string> member_item_ids;

  bool has_member(std::string_view item_id) const {
    return std::binary_search(member_item_ids.begin(), member_item_ids.end(), item_id);
  }
};

std::string_view to_string(ConceptKind kind);

inline std::vector<std::string> concept_label(const TermVector& v) { return v.top_terms(3); }

}  // namespace conceptsearch
