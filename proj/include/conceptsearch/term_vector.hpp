#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conceptsearch {

/// Sparse term -> weight map, kept sorted by term.
///
/// Weights are strictly positive: zero entries are dropped on construction
/// and negative or non-finite weights are rejected. The Euclidean norm is
/// cached.
class TermVector {
 public:
  using Entry = std::pair<std::string, double>;

  TermVector() = default;

  // Duplicate terms are summed.
  static TermVector from_entries(std::vector<Entry> entries);
  static TermVector from_map(const std::map<std::string, double>& weights);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const { return norm_; }
  double sum() const;
  double weight(std::string_view term) const;
  bool contains(std::string_view term) const { return weight(term) > 0.0; }

  TermVector scaled(double factor) const;
  // Rescaled to unit L1 mass (a probability distribution over terms).
  TermVector normalized_to_sum() const;
  // Rescaled to unit Euclidean norm.
  TermVector normalized_to_norm() const;

  // Highest-weight terms; ties broken by lexicographic term order.
  std::vector<std::string> top_terms(std::size_t n) const;

  std::map<std::string, double> to_map() const;

  friend bool operator==(const TermVector& a, const TermVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  explicit TermVector(std::vector<Entry> sorted_entries);

  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

double dot(const TermVector& a, const TermVector& b);

// dot(a,b) / (|a| |b|), 0 when either vector is empty.
double cosine(const TermVector& a, const TermVector& b);

// Vector with weight 1 for each distinct term.
TermVector unit_vector(const std::vector<std::string>& terms);

}  // namespace conceptsearch
