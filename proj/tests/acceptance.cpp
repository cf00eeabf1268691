// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Tolerances are fixed constants below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "conceptsearch/cluster_concepts.hpp"
#include "conceptsearch/community_concepts.hpp"
#include "conceptsearch/engine.hpp"
#include "conceptsearch/eval.hpp"
#include "conceptsearch/linalg.hpp"
#include "conceptsearch/ranker.hpp"
#include "conceptsearch/synth.hpp"
#include "support.hpp"

using namespace conceptsearch;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kScoreTol = 1e-9;
constexpr double kOrthoTol = 1e-6;
constexpr double kReconTol = 1e-8;
constexpr double kSumTol = 1e-9;
constexpr double kPopularityTol = 1e-12;
constexpr double kLeaderCosine = 0.9;
constexpr double kTrendMargin = 1.10;
constexpr double kPlainBudgetSec = 10.0;
constexpr double kTrendBudgetSec = 60.0;
constexpr std::size_t kCorpora = 20;
constexpr std::size_t kQueriesPerCorpus = 50;
constexpr std::size_t kSynthSeeds = 10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join_query(const std::vector<std::string>& terms) {
  std::string raw;
  for (const auto& t : terms) raw += t + " ";
  return raw;
}

template <typename Hit>
bool same_ranking(const std::vector<Hit>& got, const std::vector<testsupport::OracleHit>& want,
                  double& worst) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].item_id != want[i].id) return false;
    worst = std::max(worst, std::abs(got[i].score - want[i].score));
  }
  return worst < kScoreTol;
}

Outcome plain_oracle() {
  const auto t0 = Clock::now();
  std::size_t checked = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < kCorpora; ++c) {
    const Corpus corpus = testsupport::random_corpus(1000 + c);
    const auto index = ItemVectorIndex::build(corpus);
    const auto oracle = testsupport::oracle_index(corpus);
    for (std::size_t q = 0; q < kQueriesPerCorpus; ++q) {
      const auto terms = testsupport::random_query((1000 + c) * 1000 + q);
      const auto got = plain_search(index, terms, corpus.items.size());
      if (!same_ranking(got, testsupport::oracle_plain(oracle, terms), worst)) {
        return {false, "corpus " + std::to_string(c) + " query " + std::to_string(q) + " differs"};
      }
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << checked << " queries, max diff " << worst << ", " << secs << " s";
  return {secs < kPlainBudgetSec, d.str()};
}

Outcome ranking_oracle() {
  std::size_t checked = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < kCorpora; ++c) {
    const Corpus corpus = testsupport::random_corpus(2000 + c, {20, 200, 40, 15});
    const auto index = ItemVectorIndex::build(corpus);
    const auto oracle = testsupport::oracle_index(corpus);
    const auto community = build_community_concepts(corpus, index).concepts;
    for (std::size_t q = 0; q < 10; ++q) {
      const auto terms = testsupport::random_query((2000 + c) * 1000 + q);
      for (Mode mode : {Mode::community, Mode::cluster}) {
        const auto query = make_query(join_query(terms), mode, 10, 1.0, 5);
        const auto concepts =
            mode == Mode::community ? community : extract_cluster_concepts(index, query, {});
        RankerConfig cfg;
        cfg.mode = mode;
        cfg.top_concepts = 5;
        cfg.k = corpus.items.size();
        const auto got = rank(query, concepts, cfg, index);
        const auto want = testsupport::oracle_concept_rank(oracle, concepts, query.terms, 5, cfg.lambda);
        if (!same_ranking(got, want, worst)) {
          return {false, std::string(to_string(mode)) + " mode differs on corpus " + std::to_string(c)};
        }
        ++checked;
      }
    }
  }
  std::ostringstream d;
  d << checked << " rankings (community + cluster), max diff " << worst;
  return {true, d.str()};
}

Outcome fixture_semantics() {
  const SearchEngine engine(testsupport::mini_jasmine());
  SearchParams p;
  p.q = "jasmine";
  p.mode = Mode::community;
  p.lambda = 0.5;
  p.alpha = 1.0;
  p.grouped = true;
  const auto r = engine.search(p);
  auto pos = [&](const std::string& id) {
    for (std::size_t i = 0; i < r.hits.size(); ++i) {
      if (r.hits[i].item_id == id) return i;
    }
    return r.hits.size();
  };
  bool ok = r.groups.size() >= 2 && r.groups[0].concept_id == "community:g1" &&
            r.groups[1].concept_id == "community:g2";
  for (const char* flower : {"i1", "i3"}) {
    for (const char* other : {"i4", "i5", "i6"}) ok = ok && pos(flower) < pos(other);
  }
  std::string order;
  for (const auto& h : r.hits) order += h.item_id + " ";
  return {ok, "order " + order + "| groups Flowers, Pets"};
}

Outcome synthetic_trend() {
  const auto t0 = Clock::now();
  double sums[3] = {0, 0, 0};
  const std::vector<Mode> systems{Mode::plain, Mode::cluster, Mode::community};
  for (std::size_t s = 1; s <= kSynthSeeds; ++s) {
    SynthOptions o;
    o.seed = s;
    auto bench = generate_ambiguity_benchmark(o);
    const SearchEngine engine(std::move(bench.corpus));
    SearchParams base;
    base.alpha = 1.0;
    base.adaptive_alpha = false;
    const auto report = compare_systems(engine, bench.queries, bench.qrels, systems, 10, base);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto* curve = report.find(systems[i]);
      sums[i] += curve && curve->mean_precision[9] ? *curve->mean_precision[9] : 0.0;
    }
  }
  const double plain = sums[0] / kSynthSeeds;
  const double cluster = sums[1] / kSynthSeeds;
  const double community = sums[2] / kSynthSeeds;
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d.precision(4);
  d << "P@10 over " << kSynthSeeds << " seeds: community " << community << ", cluster "
    << cluster << ", plain " << plain << " (+" << 100.0 * (community / plain - 1.0)
    << "%), " << secs << " s";
  const bool ok = community >= cluster && cluster >= plain && plain > 0.0 &&
                  community >= kTrendMargin * plain && secs < kTrendBudgetSec;
  return {ok, d.str()};
}

Outcome numerics() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double worst_ortho = 0.0;
  double worst_recon = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng() % 19;
    const std::size_t n = 2 + rng() % 19;
    DenseMatrix a(m, n);
    double frob = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) = g(rng);
        frob += a(r, c) * a(r, c);
      }
    }
    const std::size_t rank = 1 + rng() % (std::min(m, n) - 1);
    const SvdResult s = svd(a, rank);
    for (const auto* vs : {&s.left, &s.right}) {
      for (std::size_t i = 0; i < vs->size(); ++i) {
        for (std::size_t j = 0; j < vs->size(); ++j) {
          double d = 0.0;
          for (std::size_t k = 0; k < (*vs)[i].size(); ++k) d += (*vs)[i][k] * (*vs)[j][k];
          worst_ortho = std::max(worst_ortho, std::abs(d - (i == j ? 1.0 : 0.0)));
        }
      }
    }
    double residual = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        double x = a(r, c);
        for (std::size_t k = 0; k < rank; ++k) x -= s.left[k][r] * s.singular_values[k] * s.right[k][c];
        residual += x * x;
      }
    }
    const auto eig = testsupport::symmetric_eigen(testsupport::gram(a));
    double dropped = 0.0;
    for (std::size_t i = rank; i < eig.values.size(); ++i) dropped += std::max(0.0, eig.values[i]);
    worst_recon = std::max(worst_recon, std::abs(residual - dropped) / frob);
  }

  bool kmeans_ok = true;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({g(rng) + (i % 3) * 4.0, g(rng), g(rng)});
    const auto a = kmeans(pts, 1 + seed % 6, seed);
    const auto b = kmeans(pts, 1 + seed % 6, seed);
    for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
      kmeans_ok = kmeans_ok && a.inertia_history[i] <= a.inertia_history[i - 1];
    }
    kmeans_ok = kmeans_ok && a.members == b.members && a.inertia_history == b.inertia_history;
  }
  std::ostringstream d;
  d << "orthonormality " << worst_ortho << ", reconstruction " << worst_recon
    << ", k-means monotone and deterministic: " << (kmeans_ok ? "yes" : "no");
  return {worst_ortho < kOrthoTol && worst_recon < kReconTol && kmeans_ok, d.str()};
}

Outcome blend_boundaries() {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SearchEngine engine(testsupport::random_corpus(3000 + seed));
    for (std::uint64_t q = 0; q < 10; ++q) {
      const auto terms = testsupport::random_query(seed * 77 + q);
      const auto query = make_query(join_query(terms), Mode::community, 10, 1.0, 10);
      RankerConfig cfg;
      cfg.k = 10;
      const auto concept_hits = rank(query, engine.community_concepts(), cfg, engine.index());
      std::vector<RankedHit> plain_hits;
      for (const auto& h : plain_search(engine.index(), query, 10)) plain_hits.push_back({h.item_id, h.score, {}});
      for (std::size_t n : {1, 5, 10}) {
        auto ids = [](const std::vector<RankedHit>& v, std::size_t limit) {
          std::vector<std::string> out;
          for (std::size_t i = 0; i < v.size() && i < limit; ++i) out.push_back(v[i].item_id);
          return out;
        };
        if (ids(blend_alpha(concept_hits, plain_hits, 0.0, n), n) != ids(plain_hits, n)) {
          return {false, "alpha 0 differs from plain top-N"};
        }
        if (concept_hits.size() >= n &&
            ids(blend_alpha(concept_hits, plain_hits, 1.0, n), n) != ids(concept_hits, n)) {
          return {false, "alpha 1 differs from concept top-N"};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " (query, N) pairs at alpha 0 and 1"};
}

Outcome normalization() {
  double worst_sum = 0.0;
  double worst_leader = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Corpus corpus = testsupport::random_corpus(4000 + seed, {20, 200, 15, 25});
    const auto index = ItemVectorIndex::build(corpus);
    const auto built = build_community_concepts(corpus, index);
    std::map<std::string, const CommunityVector*> by_id;
    for (const auto& v : built.vectors) {
      by_id[v.community_id] = &v;
      if (!v.vector.empty()) worst_sum = std::max(worst_sum, std::abs(v.vector.sum() - 1.0));
    }
    for (const auto& c : built.concepts) {
      const auto* leader = by_id.at(c.source_communities.front().first);
      for (const auto& [id, w] : c.source_communities) {
        worst_leader = std::min(worst_leader, cosine(leader->vector, by_id.at(id)->vector));
      }
    }
  }
  const SearchEngine engine(testsupport::mini_jasmine());
  double popularity = -1.0;
  for (const auto& c : engine.community_concepts()) {
    if (c.id == "community:g1") popularity = c.popularity;
  }
  const double pop_err = std::abs(popularity - std::log(101.0));
  std::ostringstream d;
  d << "max |sum-1| " << worst_sum << ", min leader cosine " << worst_leader
    << ", |P(Flowers) - ln 101| " << pop_err;
  return {worst_sum <= kSumTol && worst_leader >= kLeaderCosine && pop_err <= kPopularityTol, d.str()};
}

Outcome coverage() {
  const SearchEngine engine(testsupport::mini_jasmine());
  const std::vector<EvalQuery> queries{{"jasmine", "jasmine"}};
  const auto cov = coverage_report(engine.corpus(), queries, engine.community_vectors());
  const std::size_t matches = cov.matches_by_query.at("jasmine");
  std::size_t items = 0;
  for (const auto& [k, n] : cov.communities_per_item) items += n;
  const std::size_t zero = cov.communities_per_item.count(0) ? cov.communities_per_item.at(0) : 0;
  const double stats_fraction = engine.stats().zero_community_fraction;
  std::ostringstream d;
  d << matches << " matching communities, zero-community items " << zero << "/" << items;
  return {matches == 2 && zero == 2 && items == 6 && stats_fraction == 2.0 / 6.0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"plain search equals exhaustive cosine scan", plain_oracle},
      {"concept ranking equals brute-force sum", ranking_oracle},
      {"mini-jasmine fixture semantics", fixture_semantics},
      {"synthetic trend community >= cluster >= plain", synthetic_trend},
      {"SVD and k-means numerics", numerics},
      {"blend_alpha boundary exactness", blend_boundaries},
      {"community normalization and merge criterion", normalization},
      {"mini-jasmine coverage counts", coverage},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
