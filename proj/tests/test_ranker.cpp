#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "conceptsearch/cluster_concepts.hpp"
#include "conceptsearch/community_concepts.hpp"
#include "conceptsearch/ranker.hpp"
#include "support.hpp"

using namespace conceptsearch;

namespace {

std::vector<std::string> ids_of(const std::vector<RankedHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(h.item_id);
  return out;
}

std::vector<RankedHit> hits(std::initializer_list<const char*> ids) {
  std::vector<RankedHit> out;
  double s = 1.0;
  for (const char* id : ids) out.push_back({id, s -= 0.01, {}});
  return out;
}

std::size_t position(const std::vector<std::string>& v, const std::string& id) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), id) - v.begin());
}

}  // namespace

TEST_CASE("mini-jasmine: flower items outrank the pet and unaffiliated items") {
  const Corpus c = testsupport::mini_jasmine();
  const auto index = ItemVectorIndex::build(c);
  const auto concepts = build_community_concepts(c, index).concepts;
  const auto q = make_query("jasmine", Mode::community, 10, 1.0, 10);
  RankerConfig cfg;
  const auto ranked = ids_of(rank(q, concepts, cfg, index));
  for (const char* flower : {"i1", "i3"}) {
    CHECK(position(ranked, flower) < position(ranked, "i4"));
    CHECK(position(ranked, flower) < position(ranked, "i5"));
    CHECK(position(ranked, flower) < position(ranked, "i6"));
  }
  CHECK(position(ranked, "i4") < position(ranked, "i5"));

  const auto groups = group_by_concept(q, concepts, cfg, index);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].concept_id == "community:g1");
  CHECK(groups[1].concept_id == "community:g2");
  CHECK(groups[0].concept_score == doctest::Approx(2.0 / std::sqrt(11.0) * std::log(101.0)));
  CHECK(groups[1].concept_score == doctest::Approx(std::log(6.0) / std::sqrt(2.0)));
}

TEST_CASE("each hit's score is the sum of its contributions") {
  const Corpus c = testsupport::mini_jasmine();
  const auto index = ItemVectorIndex::build(c);
  const auto concepts = build_community_concepts(c, index).concepts;
  const auto q = make_query("jasmine flower", Mode::community, 10, 1.0, 10);
  const auto selected = select_concepts(q, concepts, 10);
  for (const auto& h : rank(q, selected, RankerConfig{}, index)) {
    double s = 0.0;
    for (const auto& part : h.contributions) {
      CHECK(part.term > 0.0);
      s += part.term;
    }
    CHECK(h.score == s);
  }
}

TEST_CASE("ranking matches the brute-force evaluator") {
  for (std::uint64_t seed = 200; seed < 206; ++seed) {
    testsupport::RandomCorpusOptions o;
    o.communities = 12;
    const Corpus c = testsupport::random_corpus(seed, o);
    const auto index = ItemVectorIndex::build(c);
    const auto oracle = testsupport::oracle_index(c);
    const auto community = build_community_concepts(c, index).concepts;
    for (std::uint64_t qs = 0; qs < 8; ++qs) {
      const auto terms = testsupport::random_query(seed * 100 + qs);
      std::string raw;
      for (const auto& t : terms) raw += t + " ";
      for (Mode mode : {Mode::community, Mode::cluster}) {
        const auto q = make_query(raw, mode, 10, 1.0, 4);
        const auto concepts =
            mode == Mode::community ? community : extract_cluster_concepts(index, q, {});
        RankerConfig cfg;
        cfg.mode = mode;
        cfg.top_concepts = 4;
        cfg.lambda = 0.3;
        cfg.k = 100000;
        const auto got = rank(q, concepts, cfg, index);
        const auto want = testsupport::oracle_concept_rank(oracle, concepts, q.terms, 4, 0.3);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].item_id == want[i].id);
          CHECK(std::abs(got[i].score - want[i].score) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("select_concepts drops unrelated concepts and caps the count") {
  const Corpus c = testsupport::mini_jasmine();
  const auto index = ItemVectorIndex::build(c);
  const auto concepts = build_community_concepts(c, index).concepts;
  CHECK(select_concepts(make_query("rose", Mode::community, 10, 1, 10), concepts, 10).size() == 1);
  CHECK(select_concepts(make_query("unknown", Mode::community, 10, 1, 10), concepts, 10).empty());
  CHECK(select_concepts(make_query("jasmine", Mode::community, 10, 1, 10), concepts, 1).size() == 1);
}

TEST_CASE("blend_alpha boundaries") {
  const auto cpt = hits({"a", "b", "c", "d", "e"});
  const auto plain = hits({"x", "b", "y", "z", "w"});
  CHECK(ids_of(blend_alpha(cpt, plain, 1.0, 4)) == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(ids_of(blend_alpha(cpt, plain, 0.0, 4)) == std::vector<std::string>{"x", "b", "y", "z"});
  // two concept slots, then plain without the duplicate b
  CHECK(ids_of(blend_alpha(cpt, plain, 0.5, 4)) == std::vector<std::string>{"a", "b", "x", "y"});
  // ceil(0.3 * 4) = 2
  CHECK(blend_alpha(cpt, plain, 0.3, 4).front().item_id == "a");
  CHECK(ids_of(blend_alpha(cpt, plain, 0.25, 4)) == std::vector<std::string>{"a", "x", "b", "y"});
  CHECK_THROWS_AS(blend_alpha(cpt, plain, 1.5, 4), std::invalid_argument);
}

TEST_CASE("blend_alpha backfills a short concept list from plain") {
  const auto cpt = hits({"a"});
  const auto plain = hits({"x", "a", "y"});
  CHECK(ids_of(blend_alpha(cpt, plain, 1.0, 3)) == std::vector<std::string>{"a", "x", "y"});
  CHECK(blend_alpha(cpt, plain, 1.0, 10).size() == 3);
}

TEST_CASE("blend_alpha property: no duplicates and exact endpoints") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RankedHit> a;
    std::vector<RankedHit> b;
    for (int i = 0; i < 15; ++i) {
      if (rng() % 2) a.push_back({"i" + std::to_string(rng() % 20), 0.0, {}});
      if (rng() % 2) b.push_back({"i" + std::to_string(rng() % 20), 0.0, {}});
    }
    auto dedupe = [](std::vector<RankedHit>& v) {
      std::set<std::string> seen;
      std::erase_if(v, [&](const RankedHit& h) { return !seen.insert(h.item_id).second; });
    };
    dedupe(a);
    dedupe(b);
    const std::size_t n = 1 + rng() % 12;
    const double alpha = static_cast<double>(rng() % 11) / 10.0;
    const auto out = blend_alpha(a, b, alpha, n);
    std::set<std::string> ids;
    for (const auto& h : out) CHECK(ids.insert(h.item_id).second);
    CHECK(out.size() <= n);
    const auto top = [&](const std::vector<RankedHit>& v) {
      auto ids = ids_of(v);
      ids.resize(std::min(n, ids.size()));
      return ids;
    };
    if (alpha == 0.0) CHECK(ids_of(out) == top(b));
    if (alpha == 1.0 && a.size() >= n) CHECK(ids_of(out) == top(a));
  }
}

TEST_CASE("ranker configuration is validated") {
  RankerConfig cfg;
  cfg.lambda = -0.1;
  CHECK_THROWS_AS(check(cfg), std::invalid_argument);
  cfg = {};
  cfg.k = 0;
  CHECK_THROWS_AS(check(cfg), std::invalid_argument);
  cfg = {};
  cfg.top_concepts = 0;
  CHECK_THROWS_AS(check(cfg), std::invalid_argument);
  CHECK_NOTHROW(check(RankerConfig{}));
}

TEST_CASE("groups list each concept's items best first") {
  const Corpus c = testsupport::mini_jasmine();
  const auto index = ItemVectorIndex::build(c);
  const auto concepts = build_community_concepts(c, index).concepts;
  const auto q = make_query("jasmine", Mode::community, 10, 1.0, 10);
  RankerConfig cfg;
  cfg.group_items = 3;
  for (const auto& g : group_by_concept(q, concepts, cfg, index)) {
    CHECK(g.items.size() <= 3);
    for (std::size_t i = 1; i < g.items.size(); ++i) CHECK(ranks_before(g.items[i - 1], g.items[i]));
  }
}
