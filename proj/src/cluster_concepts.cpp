#include "conceptsearch/cluster_concepts.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "conceptsearch/linalg.hpp"

namespace conceptsearch {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

LatentSpace lsi_project(std::span<const DocVector> docs, std::size_t rank) {
  if (docs.empty()) throw std::invalid_argument("lsi_project needs at least one document");
  if (rank == 0) throw std::invalid_argument("lsi rank must be at least 1");

  LatentSpace space;
  std::map<std::string, std::size_t> row_of;
  for (const auto& d : docs) {
    for (const auto& [term, w] : d.vector.entries()) row_of.emplace(term, 0);
  }
  std::size_t next = 0;
  for (auto& [term, row] : row_of) {
    row = next++;
    space.terms.push_back(term);
  }

  // Sparse columns of the term-document matrix.
  std::vector<std::vector<std::pair<std::size_t, double>>> columns;
  columns.reserve(docs.size());
  for (const auto& d : docs) {
    std::vector<std::pair<std::size_t, double>> col;
    for (const auto& [term, w] : d.vector.entries()) col.emplace_back(row_of[term], w);
    columns.push_back(std::move(col));
    space.doc_ids.push_back(d.id);
  }

  const std::size_t m = space.terms.size();
  const std::size_t n = docs.size();
  space.doc_coords.assign(n, {});
  if (m == 0) return space;

  MatVec apply = [&](std::span<const double> x, std::span<double> y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [r, w] : columns[c]) y[r] += w * x[c];
    }
  };
  MatVec apply_t = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (const auto& [r, w] : columns[c]) s += w * x[r];
      y[c] = s;
    }
  };

  const std::size_t full = std::min(m, n);
  rank = std::min(rank, full);
  // Small problems run to full depth, which makes the leading triplets exact.
  const std::size_t steps = full <= 200 ? full : std::min(full, std::max<std::size_t>(2 * rank + 20, 64));
  SvdResult res = lanczos_svd(m, n, apply, apply_t, rank, steps);

  space.rank = res.singular_values.size();
  space.singular_values = std::move(res.singular_values);
  space.term_basis = std::move(res.left);
  for (std::size_t c = 0; c < n; ++c) {
    auto& coords = space.doc_coords[c];
    coords.resize(space.rank, 0.0);
    for (std::size_t i = 0; i < space.rank; ++i) {
      double s = 0.0;
      for (const auto& [r, w] : columns[c]) s += w * space.term_basis[i][r];
      coords[i] = s;
    }
  }
  return space;
}

ClusterAssignment kmeans(std::span<const std::vector<double>> points, std::size_t k,
                         std::uint64_t seed, std::size_t max_iter) {
  const std::size_t n = points.size();
  if (k == 0) throw std::invalid_argument("k-means needs k >= 1");
  if (k > n) {
    throw std::invalid_argument("k-means k = " + std::to_string(k) + " exceeds " +
                                std::to_string(n) + " points");
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("k-means points differ in dimension");
  }

  ClusterAssignment out;
  out.k = k;

  // Farthest-first seeding.
  std::mt19937_64 rng(seed);
  const std::size_t start = static_cast<std::size_t>(rng() % n);
  out.centroids.push_back(points[start]);
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points[i], points[start]);
  while (out.centroids.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (nearest[i] > nearest[far]) far = i;
    }
    out.centroids.push_back(points[far]);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points[i], points[far]));
    }
  }

  out.members.assign(n, k);
  auto assign = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = out.members[i];
      double best_d = best < k ? squared_distance(points[i], out.centroids[best]) : 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(points[i], out.centroids[c]);
        // Keep the current cluster unless another is clearly closer.
        if (best == k || d < best_d - 1e-12 * std::max(1.0, best_d)) {
          best = c;
          best_d = d;
        }
      }
      if (best != out.members[i]) {
        out.members[i] = best;
        changed = true;
      }
    }
    return changed;
  };

  auto recompute = [&](std::size_t c) {
    std::vector<double> sum(dim, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.members[i] != c) continue;
      ++count;
      for (std::size_t d = 0; d < dim; ++d) sum[d] += points[i][d];
    }
    if (count == 0) return false;
    for (double& s : sum) s /= static_cast<double>(count);
    out.centroids[c] = std::move(sum);
    return true;
  };

  auto update = [&]() {
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c) {
      if (!recompute(c)) empty.push_back(c);
    }
    // An empty cluster takes over the point farthest from its centroid.
    for (std::size_t c : empty) {
      std::vector<std::size_t> sizes(k, 0);
      for (std::size_t m : out.members) ++sizes[m];
      std::size_t far = n;
      double far_d = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t home = out.members[i];
        if (sizes[home] < 2) continue;
        const double d = squared_distance(points[i], out.centroids[home]);
        if (d > far_d) {
          far = i;
          far_d = d;
        }
      }
      if (far == n) continue;
      const std::size_t donor = out.members[far];
      out.members[far] = c;
      out.centroids[c] = points[far];
      recompute(donor);
    }
  };

  auto inertia = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += squared_distance(points[i], out.centroids[out.members[i]]);
    }
    return s;
  };

  assign();
  update();
  out.inertia_history.push_back(inertia());
  out.iterations = 1;
  while (out.iterations < max_iter && assign()) {
    update();
    out.inertia_history.push_back(inertia());
    ++out.iterations;
  }
  out.inertia = out.inertia_history.back();
  return out;
}

std::vector<Concept> clusters_to_concepts(const ClusterAssignment& assignment,
                                          std::span<const std::string> ids,
                                          const ItemVectorIndex& index) {
  if (ids.size() != assignment.members.size()) {
    throw std::invalid_argument("cluster ids do not match the assignment");
  }
  std::vector<std::vector<std::string>> groups(assignment.k);
  for (std::size_t i = 0; i < ids.size(); ++i) groups[assignment.members[i]].push_back(ids[i]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });

  std::vector<Concept> concepts;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Concept c;
    c.kind = ConceptKind::cluster;
    c.id = "cluster:" + std::to_string(g);
    std::map<std::string, double> tags;
    for (const auto& id : groups[g]) {
      auto doc = index.doc_of(id);
      if (!doc) throw std::invalid_argument("clustered item \"" + id + "\" is not in the index");
      for (const auto& [t, n] : index.tag_counts(*doc).entries()) tags[t] += n;
    }
    c.vector = TermVector::from_map(tags).normalized_to_sum();
    c.label = concept_label(c.vector);
    c.popularity = static_cast<double>(groups[g].size());
    c.member_item_ids = std::move(groups[g]);
    concepts.push_back(std::move(c));
  }
  return concepts;
}

double item_cluster_score(const std::string& item_id, const TermVector& item_vector,
                          const Concept& cpt) {
  if (!cpt.has_member(item_id)) return 0.0;
  return cosine(item_vector, cpt.vector);
}

double item_cluster_score(const std::string& item_id, const ItemVectorIndex& index,
                          const Concept& cpt) {
  auto doc = index.doc_of(item_id);
  if (!doc) return 0.0;
  return item_cluster_score(item_id, index.vector(*doc), cpt);
}

std::vector<Concept> extract_cluster_concepts(const ItemVectorIndex& index,
                                              const QuerySpec& query,
                                              const ClusterOptions& options) {
  const auto matches = plain_search(index, query, options.match_cap);
  if (matches.empty()) return {};

  // Unit-length documents.
  std::vector<DocVector> docs;
  docs.reserve(matches.size());
  std::map<std::string, bool> distinct_terms;
  for (const auto& hit : matches) {
    const auto doc = *index.doc_of(hit.item_id);
    TermVector v = index.vector(doc).normalized_to_norm();
    for (const auto& [t, w] : v.entries()) distinct_terms.emplace(t, true);
    docs.push_back({hit.item_id, std::move(v)});
  }
  std::sort(docs.begin(), docs.end(), [](const DocVector& a, const DocVector& b) { return a.id < b.id; });

  const std::size_t n = docs.size();
  const std::size_t rank = std::max<std::size_t>(
      1, std::min({options.lsi_rank, n > 1 ? n - 1 : std::size_t{1}, distinct_terms.size()}));
  LatentSpace space = lsi_project(docs, rank);

  const std::size_t k = std::min(std::max<std::size_t>(options.clusters, 1), n);
  ClusterAssignment assignment = kmeans(space.doc_coords, k, options.seed, options.max_iter);
  return clusters_to_concepts(assignment, space.doc_ids, index);
}

}  // namespace conceptsearch
