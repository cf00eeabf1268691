#include "conceptsearch/serialize.hpp"

namespace conceptsearch {

using nlohmann::json;

namespace {

json concept_summary_json(const ConceptSummary& c) {
  return {{"id", c.id},
          {"label", c.label},
          {"query_score", c.query_score},
          {"popularity", c.popularity},
          {"concept_score", c.concept_score},
          {"member_count", c.member_count},
          {"item_count", c.item_count}};
}

void add_item_fields(json& out, const std::string& id, const Corpus& corpus) {
  auto it = corpus.items.find(id);
  if (it == corpus.items.end()) return;
  out["title"] = it->second.title;
  out["tags"] = it->second.tags;
}

}  // namespace

json search_result_json(const SearchResult& result, const Corpus& corpus) {
  json concepts = json::array();
  for (const auto& c : result.concepts) concepts.push_back(concept_summary_json(c));

  json hits = json::array();
  std::size_t rank = 0;
  for (const auto& h : result.hits) {
    json contributions = json::array();
    for (const auto& c : h.contributions) {
      contributions.push_back({{"id", c.concept_id}, {"term", c.term}});
    }
    json hit = {{"rank", ++rank}, {"id", h.item_id}, {"score", h.score}};
    add_item_fields(hit, h.item_id, corpus);
    hit["concepts"] = std::move(contributions);
    hits.push_back(std::move(hit));
  }

  json groups = json::array();
  for (const auto& g : result.groups) {
    json items = json::array();
    for (const auto& i : g.items) {
      json item = {{"id", i.item_id}, {"score", i.score}};
      add_item_fields(item, i.item_id, corpus);
      items.push_back(std::move(item));
    }
    groups.push_back({{"concept_id", g.concept_id},
                      {"label", g.label},
                      {"query_score", g.query_score},
                      {"popularity", g.popularity},
                      {"concept_score", g.concept_score},
                      {"items", std::move(items)}});
  }

  return {{"query", result.query.raw},
          {"terms", result.query.terms},
          {"mode", to_string(result.query.mode)},
          {"k", result.query.k},
          {"alpha", result.query.alpha},
          {"alpha_used", result.alpha_used},
          {"lambda", result.lambda},
          {"answerable", result.answerable},
          {"total_candidates", result.total_candidates},
          {"concepts", std::move(concepts)},
          {"hits", std::move(hits)},
          {"groups", std::move(groups)}};
}

json stats_json(const CorpusStats& stats) {
  json hist = json::object();
  for (const auto& [bucket, count] : stats.communities_per_item) {
    hist[std::to_string(bucket)] = count;
  }
  return {{"item_count", stats.item_count},
          {"user_count", stats.user_count},
          {"community_count", stats.community_count},
          {"communities_per_item", std::move(hist)},
          {"zero_community_fraction", stats.zero_community_fraction}};
}

json concepts_json(const SearchParams& params, const std::vector<ConceptSummary>& concepts) {
  json list = json::array();
  for (const auto& c : concepts) list.push_back(concept_summary_json(c));
  return {{"query", params.q}, {"mode", to_string(params.mode)}, {"concepts", std::move(list)}};
}

}  // namespace conceptsearch
