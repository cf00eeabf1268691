#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "conceptsearch/concept.hpp"
#include "conceptsearch/index.hpp"

namespace conceptsearch {

struct DocVector {
  std::string id;
  TermVector vector;
};

struct LatentSpace {
  std::size_t rank = 0;
  // Row labels of the term-document matrix, ascending.
  std::vector<std::string> terms;
  // rank orthonormal directions over `terms`.
  std::vector<std::vector<double>> term_basis;
  std::vector<double> singular_values;  // nonincreasing
  std::vector<std::string> doc_ids;
  // Per document, its projection onto term_basis.
  std::vector<std::vector<double>> doc_coords;
};

// Truncated SVD of the term-document matrix whose columns are `docs`.
// `rank` is clamped to min(#terms, #docs).
LatentSpace lsi_project(std::span<const DocVector> docs, std::size_t rank);

struct ClusterAssignment {
  std::size_t k = 0;
  std::vector<std::vector<double>> centroids;
  // Cluster index per input point.
  std::vector<std::size_t> members;
  double inertia = 0.0;
  // Inertia after each centroid update, first entry after initialization.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
};

// Lloyd's k-means with farthest-first seeding from a seed-selected start
// point. Throws std::invalid_argument when k is 0 or exceeds the point count.
ClusterAssignment kmeans(std::span<const std::vector<double>> points, std::size_t k,
                         std::uint64_t seed, std::size_t max_iter = 100);

// One concept per nonempty cluster, ordered by size (descending) then by
// smallest member id. `ids[i]` names points[i] of the assignment.
std::vector<Concept> clusters_to_concepts(const ClusterAssignment& assignment,
                                          std::span<const std::string> ids,
                                          const ItemVectorIndex& index);

// Cosine to the concept for members, exactly 0 otherwise.
double item_cluster_score(const std::string& item_id, const TermVector& item_vector,
                          const Concept& cpt);
double item_cluster_score(const std::string& item_id, const ItemVectorIndex& index,
                          const Concept& cpt);

struct ClusterOptions {
  std::size_t clusters = 5;
  std::size_t lsi_rank = 50;
  std::uint64_t seed = 42;
  // Only the best `match_cap` plain-search matches are clustered.
  std::size_t match_cap = 1000;
  std::size_t max_iter = 100;
};

// Query-time pipeline: plain matches -> LSI -> k-means -> concepts.
std::vector<Concept> extract_cluster_concepts(const ItemVectorIndex& index,
                                              const QuerySpec& query,
                                              const ClusterOptions& options = {});

}  // namespace conceptsearch
