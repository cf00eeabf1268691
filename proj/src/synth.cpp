#include "conceptsearch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace conceptsearch {

namespace {

const char* const kPivotWords[] = {"jasmine", "apple",  "jaguar", "mercury", "python",
                                   "amazon",  "java",   "orange", "saturn",  "phoenix",
                                   "puma",    "corona", "delta",  "eclipse", "falcon"};

// Hand-rolled draws over a raw 64-bit engine.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 rng_;
};

class Zipf {
 public:
  Zipf(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
      cdf_[i] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  std::size_t draw(Sampler& s) const {
    const double u = s.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::string numbered(const std::string& prefix, std::size_t n, int width) {
  std::ostringstream s;
  s << prefix << std::setw(width) << std::setfill('0') << n;
  return s.str();
}

// Distinct draws from a Zipf vocabulary.
std::vector<std::size_t> distinct_draws(const Zipf& zipf, Sampler& s, std::size_t count,
                                        std::size_t vocab) {
  std::set<std::size_t> picked;
  count = std::min(count, vocab);
  while (picked.size() < count) picked.insert(zipf.draw(s));
  return {picked.begin(), picked.end()};
}

}  // namespace

SynthBenchmark generate_ambiguity_benchmark(const SynthOptions& o) {
  const std::size_t max_pivots = std::size(kPivotWords);
  if (o.pivots == 0 || o.pivots > max_pivots) {
    throw std::invalid_argument("pivots must be between 1 and " + std::to_string(max_pivots));
  }
  if (o.background_vocab == 0 || o.popular_topic_tags == 0 || o.rare_topic_tags == 0) {
    throw std::invalid_argument("vocabularies must be nonempty");
  }

  Sampler s(o.seed);
  const Zipf background(o.background_vocab, o.zipf_exponent);
  const Zipf popular_topic(o.popular_topic_tags, o.zipf_exponent);
  const Zipf rare_topic(o.rare_topic_tags, o.zipf_exponent);

  SynthBenchmark bench;
  Corpus& corpus = bench.corpus;
  std::size_t next_item = 0;
  std::size_t next_comm = 0;

  auto bg_tag = [&](std::size_t i) { return numbered("bg", i, 3); };
  auto add_item = [&](std::vector<std::string> tags) {
    TaggedItem item;
    item.id = numbered("s", next_item++, 5);
    item.tags = std::move(tags);
    item.owner = numbered("u", s.below(o.users), 4);
    std::string id = item.id;
    corpus.items.emplace(id, std::move(item));
    return id;
  };
  auto add_community = [&](std::string title, std::int64_t members,
                           const std::vector<std::string>& pool) {
    Community c;
    c.id = numbered("g", next_comm++, 4);
    c.title = std::move(title);
    c.member_count = members;
    c.item_ids = pool;
    std::string id = c.id;
    corpus.communities.emplace(id, std::move(c));
  };
  auto sample_pool = [&](std::vector<std::string> ids, double fraction) {
    s.shuffle(ids);
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size()))));
    ids.resize(std::min(n, ids.size()));
    return ids;
  };

  for (std::size_t p = 0; p < o.pivots; ++p) {
    const std::string pivot = kPivotWords[p];
    const std::string qid = numbered("q", p, 2);
    bench.queries.push_back({qid, pivot});

    std::vector<std::string> popular;
    for (std::size_t i = 0; i < o.popular_items; ++i) {
      std::vector<std::string> tags{pivot};
      for (auto t : distinct_draws(popular_topic, s, s.between(o.popular_tags_min, o.popular_tags_max), o.popular_topic_tags)) {
        tags.push_back(pivot + "_a" + std::to_string(t));
      }
      for (std::size_t b = s.between(0, 2); b > 0; --b) tags.push_back(bg_tag(background.draw(s)));
      popular.push_back(add_item(std::move(tags)));
    }
    std::vector<std::string> rare;
    for (std::size_t i = 0; i < o.rare_items; ++i) {
      std::vector<std::string> tags{pivot, pivot + "_b" + std::to_string(rare_topic.draw(s))};
      if (s.chance(0.3)) tags.push_back(bg_tag(background.draw(s)));
      rare.push_back(add_item(std::move(tags)));
    }
    std::vector<std::string> noise;
    for (std::size_t i = 0; i < o.noise_items; ++i) {
      std::vector<std::string> tags{pivot};
      for (std::size_t b = s.between(1, 2); b > 0; --b) tags.push_back(bg_tag(background.draw(s)));
      noise.push_back(add_item(std::move(tags)));
    }

    for (std::size_t c = 0; c < o.popular_communities; ++c) {
      add_community(pivot + " lovers " + std::to_string(c),
                    static_cast<std::int64_t>(s.between(300, 2000)),
                    sample_pool(popular, o.popular_pool_fraction));
    }
    add_community(pivot + " fans", static_cast<std::int64_t>(s.between(2, 8)),
                  sample_pool(rare, o.rare_pool_fraction));

    for (const auto& id : popular) bench.qrels.set(qid, id, Label::good);
    for (const auto& id : rare) bench.qrels.set(qid, id, Label::bad);
    for (const auto& id : noise) bench.qrels.set(qid, id, Label::bad);
  }

  std::vector<std::string> background_ids;
  for (std::size_t i = 0; i < o.background_items; ++i) {
    std::vector<std::string> tags;
    for (auto t : distinct_draws(background, s, s.between(1, 5), o.background_vocab)) {
      tags.push_back(bg_tag(t));
    }
    background_ids.push_back(add_item(std::move(tags)));
  }
  for (std::size_t c = 0; c < o.background_communities && !background_ids.empty(); ++c) {
    std::vector<std::string> ids = background_ids;
    s.shuffle(ids);
    ids.resize(std::min(ids.size(), s.between(10, 30)));
    add_community("misc " + std::to_string(c), static_cast<std::int64_t>(s.between(1, 500)), ids);
  }

  normalize_corpus(corpus);
  corpus.provenance.sources = {"synthetic seed " + std::to_string(o.seed)};
  return bench;
}

void write_benchmark(const SynthBenchmark& bench, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_corpus(bench.corpus, dir / "items.jsonl", dir / "communities.jsonl");
  save_queries(bench.queries, dir / "queries.tsv");
  bench.qrels.save(dir / "qrels.tsv");
}

}  // namespace conceptsearch
