#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "conceptsearch/corpus.hpp"
#include "conceptsearch/eval.hpp"

namespace conceptsearch {

/// Parameters of the synthetic ambiguity benchmark.
///
/// Each pivot tag is shared by a popular concept (many items with a varied
/// topic vocabulary, pooled in large communities) and a rare concept (few
/// items with terse tags, pooled in one small community), plus a handful of
/// unrelated items that happen to carry the pivot. Background items draw
/// tags from a Zipf-distributed vocabulary and fill unrelated communities.
struct SynthOptions {
  std::uint64_t seed = 7;
  std::size_t pivots = 6;
  std::size_t popular_items = 100;
  std::size_t popular_topic_tags = 8;
  std::size_t popular_tags_min = 1;
  std::size_t popular_tags_max = 3;
  std::size_t popular_communities = 2;
  double popular_pool_fraction = 0.35;
  std::size_t rare_items = 20;
  std::size_t rare_topic_tags = 3;
  double rare_pool_fraction = 0.6;
  std::size_t noise_items = 10;
  std::size_t background_items = 300;
  std::size_t background_vocab = 500;
  double zipf_exponent = 1.1;
  std::size_t background_communities = 20;
  std::size_t users = 150;
};

struct SynthBenchmark {
  Corpus corpus;
  std::vector<EvalQuery> queries;
  // Popular-concept items are good for their pivot query; rare-concept and
  // unrelated pivot items are bad.
  RelevanceJudgments qrels;
};

SynthBenchmark generate_ambiguity_benchmark(const SynthOptions& options = {});

// Writes items.jsonl, communities.jsonl, queries.tsv and qrels.tsv.
void write_benchmark(const SynthBenchmark& bench, const std::filesystem::path& dir);

}  // namespace conceptsearch
