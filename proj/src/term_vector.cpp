#include "conceptsearch/term_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conceptsearch {

TermVector::TermVector(std::vector<Entry> sorted_entries)
    : entries_(std::move(sorted_entries)) {
  double sq = 0.0;
  for (const auto& [term, w] : entries_) sq += w * w;
  norm_ = std::sqrt(sq);
}

TermVector TermVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (auto& e : entries) {
    if (!std::isfinite(e.second) || e.second < 0.0) {
      throw std::invalid_argument("term weight must be finite and nonnegative: " +
                                  e.first);
    }
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second += e.second;
    } else {
      merged.push_back(std::move(e));
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.second == 0.0; });
  return TermVector(std::move(merged));
}

TermVector TermVector::from_map(const std::map<std::string, double>& weights) {
  return from_entries(std::vector<Entry>(weights.begin(), weights.end()));
}

double TermVector::sum() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

double TermVector::weight(std::string_view term) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), term,
      [](const Entry& e, std::string_view t) { return e.first < t; });
  if (it != entries_.end() && it->first == term) return it->second;
  return 0.0;
}

TermVector TermVector::scaled(double factor) const {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw std::invalid_argument("scale factor must be finite and nonnegative");
  }
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [term, w] : entries_) {
    const double v = w * factor;
    if (v > 0.0) out.emplace_back(term, v);
  }
  return TermVector(std::move(out));
}

TermVector TermVector::normalized_to_sum() const {
  const double s = sum();
  if (s == 0.0) return {};
  return scaled(1.0 / s);
}

TermVector TermVector::normalized_to_norm() const {
  if (norm_ == 0.0) return {};
  return scaled(1.0 / norm_);
}

std::vector<std::string> TermVector::top_terms(std::size_t n) const {
  std::vector<const Entry*> order;
  order.reserve(entries_.size());
  for (const auto& e : entries_) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const Entry* a, const Entry* b) {
    if (a->second != b->second) return a->second > b->second;
    return a->first < b->first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < order.size() && i < n; ++i) {
    out.push_back(order[i]->first);
  }
  return out;
}

std::map<std::string, double> TermVector::to_map() const {
  return {entries_.begin(), entries_.end()};
}

double dot(const TermVector& a, const TermVector& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  double s = 0.0;
  while (i < x.size() && j < y.size()) {
    const int c = x[i].first.compare(y[j].first);
    if (c == 0) {
      s += x[i].second * y[j].second;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double cosine(const TermVector& a, const TermVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  const double c = dot(a, b) / (a.norm() * b.norm());
  // Rounding can push identical directions a hair above 1.
  return std::clamp(c, 0.0, 1.0);
}

TermVector unit_vector(const std::vector<std::string>& terms) {
  std::vector<TermVector::Entry> entries;
  std::vector<std::string> distinct(terms);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (auto& t : distinct) entries.emplace_back(std::move(t), 1.0);
  return TermVector::from_entries(std::move(entries));
}

}  // namespace conceptsearch
