#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conceptsearch/community_concepts.hpp"
#include "conceptsearch/corpus.hpp"
#include "conceptsearch/engine.hpp"

namespace conceptsearch {

enum class Label { good, bad, unclear, unrated };

std::string_view to_string(Label label);
Label parse_label(std::string_view name);

/// Per-(query, item) relevance labels.
///
/// Judgment files are tab separated, one `query_id<TAB>item_id<TAB>label`
/// line each, label one of good/bad/unclear/unrated. Blank lines and lines
/// starting with '#' are skipped.
class RelevanceJudgments {
 public:
  void set(std::string query, std::string item, Label label);
  // unrated when absent.
  Label label(std::string_view query, std::string_view item) const;
  std::size_t size() const { return labels_.size(); }
  const std::map<std::pair<std::string, std::string>, Label, std::less<>>& all() const {
    return labels_;
  }

  static RelevanceJudgments load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::pair<std::string, std::string>, Label, std::less<>> labels_;
};

struct EvalQuery {
  std::string id;
  std::string text;
};

// One query per line: `query_id<TAB>query text`, or bare text (id = text).
std::vector<EvalQuery> load_queries(const std::filesystem::path& path);
void save_queries(std::span<const EvalQuery> queries, const std::filesystem::path& path);

// good / judged among the first k results; unclear and unrated items are
// not judged. nullopt when nothing in the prefix is judged.
std::optional<double> precision_at_k(std::span<const std::string> ranked,
                                     const RelevanceJudgments& judgments,
                                     std::string_view query_id, std::size_t k);

struct SystemCurve {
  Mode system = Mode::plain;
  // Queries the system could answer (concept modes need a relevant concept).
  std::size_t answerable = 0;
  // Index k-1: precision@k averaged over answerable queries where it is
  // defined; nullopt when no query contributes.
  std::vector<std::optional<double>> mean_precision;
  // Raw per-query curves for external significance testing; unanswerable
  // queries have no entry.
  std::map<std::string, std::vector<std::optional<double>>> per_query;
};

struct EvalReport {
  std::size_t k_max = 0;
  std::size_t query_count = 0;
  std::vector<SystemCurve> systems;

  const SystemCurve* find(Mode system) const;
  // (P_a@k - P_b@k) / P_b@k; nullopt when undefined.
  std::optional<double> improvement(Mode a, Mode b, std::size_t k) const;
};

// Runs every query through every system with `base` parameters (mode and k
// overridden) and averages precision@k for k = 1..k_max.
EvalReport compare_systems(const SearchEngine& engine, std::span<const EvalQuery> queries,
                           const RelevanceJudgments& judgments, std::span<const Mode> systems,
                           std::size_t k_max = 50, SearchParams base = {});

void write_report_text(const EvalReport& report, std::ostream& out);
// Tab separated: system, k, mean precision, then one column per query.
void write_report_table(const EvalReport& report, std::ostream& out);

struct CoverageReport {
  // communities per item -> item count
  std::map<std::size_t, std::size_t> communities_per_item;
  // matching communities per query -> query count
  std::map<std::size_t, std::size_t> matching_communities_per_query;
  std::map<std::string, std::size_t> matches_by_query;
  std::size_t query_count = 0;
  std::size_t zero_match_queries = 0;
  // Queries whose matching communities all fall below the member floor.
  std::size_t sub_floor_only_queries = 0;
};

// A community matches a query when its vector carries any query term.
CoverageReport coverage_report(const Corpus& corpus, std::span<const EvalQuery> queries,
                               std::span<const CommunityVector> communities,
                               std::int64_t member_floor = 10);

void write_coverage_text(const CoverageReport& report, std::ostream& out);

}  // namespace conceptsearch
