#include "conceptsearch/index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conceptsearch/text.hpp"

namespace conceptsearch {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::plain:
      return "plain";
    case Mode::cluster:
      return "cluster";
    case Mode::community:
      return "community";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "plain") return Mode::plain;
  if (name == "cluster") return Mode::cluster;
  if (name == "community") return Mode::community;
  throw std::invalid_argument("unknown mode \"" + std::string(name) +
                              "\" (expected plain, cluster or community)");
}

QuerySpec make_query(std::string_view raw, Mode mode, std::size_t k, double alpha,
                     std::size_t top_concepts) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (top_concepts < 1) throw std::invalid_argument("top_concepts must be at least 1");
  QuerySpec q;
  q.raw = std::string(raw);
  q.terms = tokenize_query(raw);
  if (q.terms.empty()) throw std::invalid_argument("query has no terms");
  q.mode = mode;
  q.k = k;
  q.alpha = alpha;
  q.top_concepts = top_concepts;
  return q;
}

ItemVectorIndex ItemVectorIndex::build(const Corpus& corpus, const IndexOptions& options) {
  if (!(options.tag_boost > 0.0)) {
    throw std::invalid_argument("tag_boost must be positive");
  }
  std::vector<std::string> ids;
  std::vector<std::map<std::string, double>> tf;
  std::vector<TermVector> tag_counts;
  ids.reserve(corpus.items.size());
  for (const auto& [id, item] : corpus.items) {
    ids.push_back(id);
    std::map<std::string, double> counts;
    std::map<std::string, double> tags;
    for (const auto& tag : item.tags) {
      counts[tag] += options.tag_boost;
      tags[tag] += 1.0;
    }
    if (options.title) {
      for (auto& tok : tokenize_text(item.title)) counts[tok] += 1.0;
    }
    if (options.description) {
      for (auto& tok : tokenize_text(item.description)) counts[tok] += 1.0;
    }
    tf.push_back(std::move(counts));
    tag_counts.push_back(TermVector::from_map(tags));
  }

  std::map<std::string, std::size_t> df;
  for (const auto& counts : tf) {
    for (const auto& [term, c] : counts) ++df[term];
  }
  const double n = static_cast<double>(ids.size());
  std::vector<TermVector> vectors;
  vectors.reserve(tf.size());
  for (const auto& counts : tf) {
    std::vector<TermVector::Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [term, c] : counts) {
      const double idf = std::log(n / static_cast<double>(df[term])) + 1.0;
      entries.emplace_back(term, c * idf);
    }
    vectors.push_back(TermVector::from_entries(std::move(entries)));
  }
  return from_parts(std::move(ids), std::move(vectors), std::move(tag_counts), options);
}

ItemVectorIndex ItemVectorIndex::from_parts(std::vector<std::string> ids,
                                            std::vector<TermVector> vectors,
                                            std::vector<TermVector> tag_counts,
                                            const IndexOptions& options) {
  if (ids.size() != vectors.size() || ids.size() != tag_counts.size()) {
    throw std::invalid_argument("index parts have mismatched lengths");
  }
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (!(ids[i - 1] < ids[i])) {
      throw std::invalid_argument("item ids must be strictly ascending");
    }
  }
  ItemVectorIndex index;
  index.options_ = options;
  index.ids_ = std::move(ids);
  index.vectors_ = std::move(vectors);
  index.tag_counts_ = std::move(tag_counts);
  index.rebuild_postings();
  return index;
}

void ItemVectorIndex::rebuild_postings() {
  postings_.clear();
  for (DocId doc = 0; doc < vectors_.size(); ++doc) {
    for (const auto& [term, w] : vectors_[doc].entries()) {
      postings_[term].push_back(doc);
    }
  }
}

std::optional<ItemVectorIndex::DocId> ItemVectorIndex::doc_of(std::string_view item_id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), item_id);
  if (it == ids_.end() || *it != item_id) return std::nullopt;
  return static_cast<DocId>(it - ids_.begin());
}

std::span<const ItemVectorIndex::DocId> ItemVectorIndex::postings(std::string_view term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::size_t ItemVectorIndex::doc_freq(std::string_view term) const {
  return postings(term).size();
}

double ItemVectorIndex::idf(std::string_view term) const {
  const std::size_t df = doc_freq(term);
  if (df == 0) return 0.0;
  return std::log(static_cast<double>(ids_.size()) / static_cast<double>(df)) + 1.0;
}

TermVector ItemVectorIndex::query_vector(std::span<const std::string> terms) const {
  std::vector<TermVector::Entry> entries;
  for (const auto& t : terms) {
    const double w = idf(t);
    if (w > 0.0) entries.emplace_back(t, w);
  }
  return TermVector::from_entries(std::move(entries));
}

std::vector<ItemVectorIndex::DocId> ItemVectorIndex::matching_docs(
    std::span<const std::string> terms) const {
  std::vector<DocId> out;
  for (const auto& t : terms) {
    auto p = postings(t);
    out.insert(out.end(), p.begin(), p.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ranks_before(const ScoredItem& a, const ScoredItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.item_id < b.item_id;
}

std::vector<ScoredItem> plain_search(const ItemVectorIndex& index,
                                     std::span<const std::string> terms, std::size_t k) {
  const TermVector q = index.query_vector(terms);
  std::vector<ScoredItem> hits;
  if (q.empty() || k == 0) return hits;
  for (auto doc : index.matching_docs(terms)) {
    hits.push_back({index.item_id(doc), cosine(q, index.vector(doc))});
  }
  const std::size_t n = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(),
                    ranks_before);
  hits.resize(n);
  return hits;
}

}  // namespace conceptsearch
