#pragma once

#include <vector>

#include <json.hpp>

#include "conceptsearch/corpus.hpp"
#include "conceptsearch/engine.hpp"

namespace conceptsearch {

// Response schemas shared by the CLI (--json) and the HTTP service.

// {"query", "terms", "mode", "k", "alpha", "alpha_used", "lambda",
//  "answerable", "total_candidates", "concepts": [...], "hits": [...],
//  "groups": [...]}
nlohmann::json search_result_json(const SearchResult& result, const Corpus& corpus);

// {"item_count", "user_count", "community_count", "communities_per_item":
//  {"0": n, ...}, "zero_community_fraction"}
nlohmann::json stats_json(const CorpusStats& stats);

// {"query", "mode", "concepts": [{"id", "label", "query_score",
//  "popularity", "concept_score", "member_count", "item_count"}]}
nlohmann::json concepts_json(const SearchParams& params,
                             const std::vector<ConceptSummary>& concepts);

}  // namespace conceptsearch
