#include "conceptsearch/engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace conceptsearch {

namespace {

ConceptSummary summarize(const ScoredConcept& sc) {
  return {sc.entry->id,
          sc.entry->label,
          sc.query_score,
          sc.entry->popularity,
          sc.concept_score,
          sc.entry->member_count,
          sc.entry->member_item_ids.size()};
}

RankedHit as_hit(const ScoredItem& item) { return {item.item_id, item.score, {}}; }

}  // namespace

SearchEngine::SearchEngine(Corpus corpus, const IndexOptions& index_options,
                           const CommunityConceptOptions& concept_options)
    : corpus_(std::move(corpus)),
      index_(ItemVectorIndex::build(corpus_, index_options)),
      concept_options_(concept_options) {
  CommunityConcepts built = build_community_concepts(corpus_, index_, concept_options_);
  vectors_ = std::move(built.vectors);
  concepts_ = std::move(built.concepts);
}

SearchEngine::SearchEngine(Corpus corpus, ItemVectorIndex index, std::vector<Concept> concepts,
                           const CommunityConceptOptions& concept_options)
    : corpus_(std::move(corpus)),
      index_(std::move(index)),
      concept_options_(concept_options),
      concepts_(std::move(concepts)) {
  for (const auto& [id, comm] : corpus_.communities) {
    vectors_.push_back(build_community_vector(comm, index_, concept_options_.trim_sd));
  }
}

SearchResult SearchEngine::search(const SearchParams& params) const {
  SearchResult result;
  result.query = make_query(params.q, params.mode, params.k, params.alpha, params.top_concepts);
  result.lambda = params.lambda;
  result.alpha_used = params.alpha;

  RankerConfig cfg;
  cfg.mode = params.mode;
  cfg.lambda = params.lambda;
  cfg.alpha = params.alpha;
  cfg.top_concepts = params.top_concepts;
  cfg.k = params.k;
  check(cfg);

  const auto plain = plain_search(index_, result.query, params.k);
  if (params.mode == Mode::plain) {
    result.total_candidates = index_.matching_docs(result.query.terms).size();
    result.answerable = !plain.empty();
    std::transform(plain.begin(), plain.end(), std::back_inserter(result.hits), as_hit);
    return result;
  }

  std::vector<Concept> query_concepts;
  std::span<const Concept> pool = concepts_;
  if (params.mode == Mode::cluster) {
    query_concepts = extract_cluster_concepts(index_, result.query, params.cluster);
    pool = query_concepts;
  }
  const auto selected = select_concepts(result.query, pool, params.top_concepts);
  result.answerable = !selected.empty();
  for (const auto& sc : selected) result.concepts.push_back(summarize(sc));

  if (params.mode == Mode::community && params.adaptive_alpha) {
    const bool any_popular = std::any_of(selected.begin(), selected.end(), [&](const auto& sc) {
      return sc.entry->member_count >= params.popularity_floor;
    });
    if (!any_popular) result.alpha_used = 0.0;
  }

  RankerConfig full = cfg;
  full.k = std::numeric_limits<std::size_t>::max();
  auto concept_hits = rank(result.query, selected, full, index_);
  result.total_candidates = concept_hits.size();

  std::vector<RankedHit> plain_hits;
  std::transform(plain.begin(), plain.end(), std::back_inserter(plain_hits), as_hit);
  result.hits = blend_alpha(concept_hits, plain_hits, result.alpha_used, params.k);

  if (params.grouped) result.groups = group_by_concept(result.query, selected, cfg, index_);
  return result;
}

std::vector<ConceptSummary> SearchEngine::concepts_for(const SearchParams& params) const {
  const QuerySpec query = make_query(params.q, params.mode, params.k, params.alpha,
                                     params.top_concepts);
  std::vector<Concept> query_concepts;
  std::span<const Concept> pool = concepts_;
  if (params.mode == Mode::cluster) {
    query_concepts = extract_cluster_concepts(index_, query, params.cluster);
    pool = query_concepts;
  } else if (params.mode == Mode::plain) {
    throw std::invalid_argument("plain mode has no concepts");
  }
  std::vector<ConceptSummary> out;
  for (const auto& sc : select_concepts(query, pool, params.top_concepts)) {
    out.push_back(summarize(sc));
  }
  return out;
}

}  // namespace conceptsearch
