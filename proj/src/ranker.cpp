#include "conceptsearch/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "conceptsearch/cluster_concepts.hpp"
#include "conceptsearch/community_concepts.hpp"

namespace conceptsearch {

void check(const RankerConfig& cfg) {
  if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (cfg.top_concepts < 1) throw std::invalid_argument("top_concepts must be at least 1");
  if (cfg.k < 1) throw std::invalid_argument("k must be at least 1");
}

std::vector<ScoredConcept> select_concepts(const QuerySpec& query,
                                           std::span<const Concept> concepts, std::size_t top) {
  const TermVector q = unit_vector(query.terms);
  std::vector<ScoredConcept> scored;
  for (const auto& c : concepts) {
    const double qs = concept_query_score(c, q);
    if (qs > 0.0) scored.push_back({&c, qs, qs * c.popularity});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredConcept& a, const ScoredConcept& b) {
    if (a.concept_score != b.concept_score) return a.concept_score > b.concept_score;
    return a.entry->id < b.entry->id;
  });
  if (scored.size() > top) scored.resize(top);
  return scored;
}

double item_score(const std::string& item_id, const Concept& cpt,
                  const ItemVectorIndex& index, double lambda) {
  if (cpt.kind == ConceptKind::cluster) return item_cluster_score(item_id, index, cpt);
  return item_concept_score(item_id, index, cpt, lambda);
}

std::vector<std::string> concept_candidates(const Concept& cpt, const ItemVectorIndex& index,
                                            const QuerySpec& query) {
  if (cpt.kind == ConceptKind::cluster) return cpt.member_item_ids;
  return candidate_items(cpt, index, query);
}

std::vector<RankedHit> rank(const QuerySpec& query, std::span<const ScoredConcept> selected,
                            const RankerConfig& cfg, const ItemVectorIndex& index) {
  check(cfg);
  std::map<std::string, RankedHit> hits;
  for (const auto& sc : selected) {
    for (auto& id : concept_candidates(*sc.entry, index, query)) {
      const double term = sc.concept_score * item_score(id, *sc.entry, index, cfg.lambda);
      if (term <= 0.0) continue;
      RankedHit& hit = hits[id];
      hit.item_id = id;
      hit.contributions.push_back({sc.entry->id, term});
    }
  }

  std::vector<RankedHit> out;
  out.reserve(hits.size());
  for (auto& [id, hit] : hits) {
    // Summed in concept order.
    for (const auto& c : hit.contributions) hit.score += c.term;
    out.push_back(std::move(hit));
  }
  std::sort(out.begin(), out.end(), [](const RankedHit& a, const RankedHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item_id < b.item_id;
  });
  if (out.size() > cfg.k) out.resize(cfg.k);
  return out;
}

std::vector<RankedHit> rank(const QuerySpec& query, std::span<const Concept> concepts,
                            const RankerConfig& cfg, const ItemVectorIndex& index) {
  const auto selected = select_concepts(query, concepts, cfg.top_concepts);
  return rank(query, selected, cfg, index);
}

std::vector<RankedHit> blend_alpha(std::span<const RankedHit> concept_hits,
                                   std::span<const RankedHit> plain_hits, double alpha,
                                   std::size_t n) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  const auto reserved =
      static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n) - 1e-12));

  std::vector<RankedHit> out;
  std::set<std::string> seen;
  auto take = [&](std::span<const RankedHit> from, std::size_t& pos, std::size_t limit) {
    while (out.size() < limit && pos < from.size()) {
      const RankedHit& h = from[pos++];
      if (seen.insert(h.item_id).second) out.push_back(h);
    }
  };
  std::size_t ci = 0;
  std::size_t pi = 0;
  take(concept_hits, ci, std::min(reserved, n));
  take(plain_hits, pi, n);
  return out;
}

std::vector<ConceptGroup> group_by_concept(const QuerySpec& query,
                                           std::span<const ScoredConcept> selected,
                                           const RankerConfig& cfg, const ItemVectorIndex& index) {
  check(cfg);
  std::vector<ConceptGroup> groups;
  for (const auto& sc : selected) {
    ConceptGroup g;
    g.concept_id = sc.entry->id;
    g.label = sc.entry->label;
    g.query_score = sc.query_score;
    g.popularity = sc.entry->popularity;
    g.concept_score = sc.concept_score;
    for (auto& id : concept_candidates(*sc.entry, index, query)) {
      const double s = item_score(id, *sc.entry, index, cfg.lambda);
      if (s > 0.0) g.items.push_back({std::move(id), s});
    }
    const std::size_t n = std::min(cfg.group_items, g.items.size());
    std::partial_sort(g.items.begin(), g.items.begin() + static_cast<std::ptrdiff_t>(n),
                      g.items.end(), ranks_before);
    g.items.resize(n);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<ConceptGroup> group_by_concept(const QuerySpec& query,
                                           std::span<const Concept> concepts,
                                           const RankerConfig& cfg, const ItemVectorIndex& index) {
  const auto selected = select_concepts(query, concepts, cfg.top_concepts);
  return group_by_concept(query, selected, cfg, index);
}

}  // namespace conceptsearch
