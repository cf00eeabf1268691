#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "conceptsearch/corpus.hpp"

namespace testsupport {

using conceptsearch::ConceptKind;
using conceptsearch::DenseMatrix;

std::string data_path(const std::string& name) {
  return std::string(CONCEPTSEARCH_TEST_DATA) + "/" + name;
}

Corpus mini_jasmine() {
  return conceptsearch::load_corpus(data_path("mini_jasmine_items.jsonl"),
                                    data_path("mini_jasmine_communities.jsonl"));
}

namespace {

std::string word(std::size_t i) {
  std::ostringstream s;
  s << "w" << i;
  return s.str();
}

// Squaring a uniform draw skews toward low word numbers.
std::size_t skewed(std::mt19937_64& rng, std::size_t n) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return std::min(n - 1, static_cast<std::size_t>(u * u * static_cast<double>(n)));
}

}  // namespace

Corpus random_corpus(std::uint64_t seed, const RandomCorpusOptions& o) {
  std::mt19937_64 rng(seed);
  auto between = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  Corpus c;
  const std::size_t n = between(o.min_items, o.max_items);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    conceptsearch::TaggedItem item;
    item.id = "it" + std::to_string(1000 + i);
    for (std::size_t t = between(1, 5); t > 0; --t) item.tags.push_back(word(skewed(rng, o.vocab)));
    for (std::size_t t = between(0, 3); t > 0; --t) {
      if (!item.title.empty()) item.title += ' ';
      item.title += word(skewed(rng, o.vocab));
    }
    if (between(0, 3) == 0) item.description = word(skewed(rng, o.vocab));
    item.owner = "u" + std::to_string(between(0, 30));
    ids.push_back(item.id);
    c.items.emplace(item.id, std::move(item));
  }
  for (std::size_t g = 0; g < o.communities; ++g) {
    conceptsearch::Community comm;
    comm.id = "c" + std::to_string(g);
    comm.title = "community " + std::to_string(g);
    comm.member_count = static_cast<std::int64_t>(between(1, 1000));
    std::set<std::string> pool;
    for (std::size_t k = between(1, 15); k > 0; --k) pool.insert(ids[between(0, n - 1)]);
    comm.item_ids.assign(pool.begin(), pool.end());
    c.communities.emplace(comm.id, std::move(comm));
  }
  conceptsearch::normalize_corpus(c);
  return c;
}

std::vector<std::string> random_query(std::uint64_t seed, std::size_t vocab) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::string> q;
  const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  for (std::size_t i = 0; i < len; ++i) {
    // Occasionally a word nobody uses.
    const std::size_t w = std::uniform_int_distribution<std::size_t>(0, vocab + 3)(rng);
    q.push_back(word(w));
  }
  return q;
}

OracleIndex oracle_index(const Corpus& corpus, double tag_boost) {
  OracleIndex out;
  std::map<std::string, WeightMap> tf;
  std::map<std::string, std::size_t> df;
  for (const auto& [id, item] : corpus.items) {
    out.ids.push_back(id);
    WeightMap& counts = tf[id];
    WeightMap& tags = out.tags[id];
    for (const auto& t : item.tags) {
      counts[t] += tag_boost;
      tags[t] += 1.0;
    }
    for (const std::string* text : {&item.title, &item.description}) {
      std::istringstream words(*text);
      for (std::string w; words >> w;) counts[w] += 1.0;
    }
    for (const auto& [t, _] : counts) ++df[t];
  }
  const double n = static_cast<double>(out.ids.size());
  for (const auto& [t, d] : df) out.idf[t] = std::log(n / static_cast<double>(d)) + 1.0;
  for (const auto& [id, counts] : tf) {
    for (const auto& [t, c] : counts) out.tfidf[id][t] = c * out.idf[t];
  }
  return out;
}

double oracle_cosine(const WeightMap& a, const WeightMap& b) {
  double d = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [t, w] : a) {
    na += w * w;
    auto it = b.find(t);
    if (it != b.end()) d += w * it->second;
  }
  for (const auto& [t, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return d / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

void sort_hits(std::vector<OracleHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const OracleHit& a, const OracleHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

}  // namespace

std::vector<OracleHit> oracle_plain(const OracleIndex& index,
                                    const std::vector<std::string>& terms) {
  WeightMap q;
  for (const auto& t : terms) {
    auto it = index.idf.find(t);
    if (it != index.idf.end()) q[t] += it->second;
  }
  std::vector<OracleHit> hits;
  for (const auto& id : index.ids) {
    const double s = oracle_cosine(q, index.tfidf.at(id));
    if (s > 0.0) hits.push_back({id, s});
  }
  sort_hits(hits);
  return hits;
}

std::vector<OracleHit> oracle_concept_rank(const OracleIndex& index,
                                           const std::vector<Concept>& concepts,
                                           const std::vector<std::string>& terms,
                                           std::size_t top_concepts, double lambda) {
  WeightMap unit_query;
  for (const auto& t : terms) unit_query[t] = 1.0;

  struct Picked {
    const Concept* c;
    double pqc;
  };
  std::vector<Picked> picked;
  for (const auto& c : concepts) {
    const double pqc = oracle_cosine(c.vector.to_map(), unit_query);
    if (pqc > 0.0) picked.push_back({&c, pqc});
  }
  std::sort(picked.begin(), picked.end(), [](const Picked& a, const Picked& b) {
    const double sa = a.pqc * a.c->popularity;
    const double sb = b.pqc * b.c->popularity;
    if (sa != sb) return sa > sb;
    return a.c->id < b.c->id;
  });
  if (picked.size() > top_concepts) picked.resize(top_concepts);

  std::vector<OracleHit> hits;
  for (const auto& id : index.ids) {
    const WeightMap& item = index.tfidf.at(id);
    bool matches_query = false;
    for (const auto& t : terms) matches_query = matches_query || item.count(t) > 0;
    double score = 0.0;
    for (const auto& p : picked) {
      const auto& members = p.c->member_item_ids;
      const bool member = std::find(members.begin(), members.end(), id) != members.end();
      const double cos = oracle_cosine(item, p.c->vector.to_map());
      double pic = 0.0;
      if (p.c->kind == ConceptKind::cluster) {
        pic = member ? cos : 0.0;
      } else if (member || matches_query) {
        pic = lambda * (member ? 1.0 : 0.0) + (1.0 - lambda) * cos;
      }
      score += p.pqc * p.c->popularity * pic;
    }
    if (score > 0.0) hits.push_back({id, score});
  }
  sort_hits(hits);
  return hits;
}

DenseMatrix gram(const DenseMatrix& a) {
  DenseMatrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
      g(i, j) = s;
    }
  }
  return g;
}

Eigen symmetric_eigen(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  DenseMatrix a = s;
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  Eigen e;
  for (std::size_t i : order) {
    e.values.push_back(a(i, i));
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v(k, i);
    e.vectors.push_back(std::move(col));
  }
  return e;
}

}  // namespace testsupport
