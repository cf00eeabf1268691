#include "conceptsearch/community_concepts.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace conceptsearch {

std::string_view to_string(ConceptKind kind) {
  return kind == ConceptKind::community ? "community" : "cluster";
}

std::map<std::string, double> trim_low_frequency(const std::map<std::string, double>& raw_counts,
                                                 double num_sd) {
  if (raw_counts.empty()) return {};
  const double n = static_cast<double>(raw_counts.size());
  double mean = 0.0;
  for (const auto& [t, c] : raw_counts) mean += c;
  mean /= n;
  double var = 0.0;
  for (const auto& [t, c] : raw_counts) var += (c - mean) * (c - mean);
  const double sd = std::sqrt(var / n);
  const double threshold = mean - num_sd * sd;

  std::map<std::string, double> kept;
  for (const auto& [t, c] : raw_counts) {
    if (!(c < threshold)) kept.emplace(t, c);
  }
  // Only reachable with a negative num_sd; the maximum is never below the mean.
  if (kept.empty()) return raw_counts;
  return kept;
}

CommunityVector build_community_vector(const Community& community,
                                       const ItemVectorIndex& index, double trim_sd) {
  CommunityVector cv;
  cv.community_id = community.id;
  cv.member_count = community.member_count;
  cv.item_ids = community.item_ids;
  std::sort(cv.item_ids.begin(), cv.item_ids.end());
  cv.item_ids.erase(std::unique(cv.item_ids.begin(), cv.item_ids.end()), cv.item_ids.end());

  std::map<std::string, double> counts;
  for (const auto& iid : cv.item_ids) {
    auto doc = index.doc_of(iid);
    if (!doc) {
      throw std::invalid_argument("community \"" + community.id + "\" item \"" + iid +
                                  "\" is not in the index");
    }
    for (const auto& [tag, c] : index.tag_counts(*doc).entries()) {
      counts[tag] += c;
      cv.raw_tag_total += static_cast<std::int64_t>(c);
    }
  }
  cv.image_count = cv.item_ids.size();
  cv.vector = TermVector::from_map(trim_low_frequency(counts, trim_sd)).normalized_to_sum();
  return cv;
}

std::vector<Concept> merge_communities(std::span<const CommunityVector> vectors,
                                       double sim_threshold) {
  std::vector<const CommunityVector*> order;
  for (const auto& v : vectors) {
    if (!v.vector.empty()) order.push_back(&v);
  }
  std::sort(order.begin(), order.end(), [](const CommunityVector* a, const CommunityVector* b) {
    if (a->member_count != b->member_count) return a->member_count > b->member_count;
    return a->community_id < b->community_id;
  });

  // Each group is a list of members, leader first.
  std::vector<std::vector<const CommunityVector*>> groups;
  for (const CommunityVector* cv : order) {
    auto home = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      return cosine(g.front()->vector, cv->vector) >= sim_threshold;
    });
    if (home == groups.end()) {
      groups.push_back({cv});
    } else {
      home->push_back(cv);
    }
  }

  std::vector<Concept> concepts;
  concepts.reserve(groups.size());
  for (const auto& group : groups) {
    Concept c;
    c.kind = ConceptKind::community;
    c.id = "community:" + group.front()->community_id;

    double images = 0.0;
    for (const auto* cv : group) images += static_cast<double>(cv->image_count);

    std::map<std::string, double> mix;
    std::set<std::string> pool;
    for (const auto* cv : group) {
      const double w = static_cast<double>(cv->image_count) / images;
      c.source_communities.emplace_back(cv->community_id, w);
      for (const auto& [t, p] : cv->vector.entries()) mix[t] += w * p;
      c.member_count += cv->member_count;
      pool.insert(cv->item_ids.begin(), cv->item_ids.end());
    }
    c.vector = TermVector::from_map(mix).normalized_to_sum();
    c.label = concept_label(c.vector);
    c.popularity = std::log1p(static_cast<double>(c.member_count));
    c.member_item_ids.assign(pool.begin(), pool.end());
    concepts.push_back(std::move(c));
  }
  return concepts;
}

CommunityConcepts build_community_concepts(const Corpus& corpus, const ItemVectorIndex& index,
                                           const CommunityConceptOptions& options) {
  CommunityConcepts out;
  out.vectors.reserve(corpus.communities.size());
  for (const auto& [id, comm] : corpus.communities) {
    CommunityVector cv = build_community_vector(comm, index, options.trim_sd);
    if (cv.vector.empty()) out.empty_communities.push_back(id);
    out.vectors.push_back(std::move(cv));
  }
  out.concepts = merge_communities(out.vectors, options.sim_threshold);
  return out;
}

double concept_query_score(const Concept& cpt, const TermVector& unit_query) {
  return cosine(cpt.vector, unit_query);
}

double concept_query_score(const Concept& cpt, const QuerySpec& query) {
  return concept_query_score(cpt, unit_vector(query.terms));
}

double item_concept_score(const TermVector& item_vector, bool is_member, const Concept& cpt,
                          double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  const double membership = is_member ? 1.0 : 0.0;
  return lambda * membership + (1.0 - lambda) * cosine(item_vector, cpt.vector);
}

double item_concept_score(const std::string& item_id, const ItemVectorIndex& index,
                          const Concept& cpt, double lambda) {
  auto doc = index.doc_of(item_id);
  static const TermVector empty;
  const TermVector& v = doc ? index.vector(*doc) : empty;
  return item_concept_score(v, cpt.has_member(item_id), cpt, lambda);
}

std::vector<std::string> candidate_items(const Concept& cpt, const ItemVectorIndex& index,
                                         const QuerySpec& query) {
  std::vector<std::string> out = cpt.member_item_ids;
  for (auto doc : index.matching_docs(query.terms)) out.push_back(index.item_id(doc));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace conceptsearch
