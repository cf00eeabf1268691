#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conceptsearch/concept.hpp"
#include "conceptsearch/corpus.hpp"
#include "conceptsearch/linalg.hpp"

namespace testsupport {

using conceptsearch::Concept;
using conceptsearch::Corpus;
using WeightMap = std::map<std::string, double>;

Corpus mini_jasmine();
std::string data_path(const std::string& name);

struct RandomCorpusOptions {
  std::size_t min_items = 20;
  std::size_t max_items = 200;
  std::size_t vocab = 40;
  std::size_t communities = 8;
};

// Lowercase ASCII tags drawn from a skewed vocabulary. Titles reuse the
// same words.
Corpus random_corpus(std::uint64_t seed, const RandomCorpusOptions& options = {});
std::vector<std::string> random_query(std::uint64_t seed, std::size_t vocab = 40);

// Straight TF-IDF over std::map, computed from the raw corpus.
struct OracleIndex {
  std::vector<std::string> ids;
  std::map<std::string, WeightMap> tfidf;
  std::map<std::string, WeightMap> tags;
  std::map<std::string, double> idf;
};
OracleIndex oracle_index(const Corpus& corpus, double tag_boost = 2.0);

double oracle_cosine(const WeightMap& a, const WeightMap& b);

struct OracleHit {
  std::string id;
  double score = 0.0;
};

// Scores every item; keeps the positive ones, best first, ties by id.
std::vector<OracleHit> oracle_plain(const OracleIndex& index,
                                    const std::vector<std::string>& terms);

// Brute-force sum over the top concepts of P(Q|C) P(C) P(I|C,Q).
std::vector<OracleHit> oracle_concept_rank(const OracleIndex& index,
                                           const std::vector<Concept>& concepts,
                                           const std::vector<std::string>& terms,
                                           std::size_t top_concepts, double lambda);

struct Eigen {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};
// Cyclic Jacobi on a symmetric matrix.
Eigen symmetric_eigen(const conceptsearch::DenseMatrix& s);
conceptsearch::DenseMatrix gram(const conceptsearch::DenseMatrix& a);

}  // namespace testsupport
