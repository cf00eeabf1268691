#include "conceptsearch/eval.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "conceptsearch/text.hpp"

namespace conceptsearch {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::good:
      return "good";
    case Label::bad:
      return "bad";
    case Label::unclear:
      return "unclear";
    case Label::unrated:
      return "unrated";
  }
  return "unrated";
}

Label parse_label(std::string_view name) {
  if (name == "good") return Label::good;
  if (name == "bad") return Label::bad;
  if (name == "unclear") return Label::unclear;
  if (name == "unrated") return Label::unrated;
  throw std::invalid_argument("unknown relevance label \"" + std::string(name) + "\"");
}

void RelevanceJudgments::set(std::string query, std::string item, Label label) {
  labels_[{std::move(query), std::move(item)}] = label;
}

Label RelevanceJudgments::label(std::string_view query, std::string_view item) const {
  auto it = labels_.find(std::pair<std::string, std::string>(query, item));
  return it == labels_.end() ? Label::unrated : it->second;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

RelevanceJudgments RelevanceJudgments::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  RelevanceJudgments j;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected query<TAB>item<TAB>label");
    }
    try {
      j.set(fields[0], fields[1], parse_label(fields[2]));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return j;
}

void RelevanceJudgments::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [key, label] : labels_) {
    out << key.first << '\t' << key.second << '\t' << to_string(label) << '\n';
  }
}

std::vector<EvalQuery> load_queries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<EvalQuery> queries;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      queries.push_back({line, line});
    } else {
      queries.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
  }
  return queries;
}

void save_queries(std::span<const EvalQuery> queries, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& q : queries) out << q.id << '\t' << q.text << '\n';
}

std::optional<double> precision_at_k(std::span<const std::string> ranked,
                                     const RelevanceJudgments& judgments,
                                     std::string_view query_id, std::size_t k) {
  if (k == 0) throw std::invalid_argument("precision_at_k needs k >= 1");
  std::size_t judged = 0;
  std::size_t good = 0;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    const Label l = judgments.label(query_id, ranked[i]);
    if (l == Label::good) {
      ++good;
      ++judged;
    } else if (l == Label::bad) {
      ++judged;
    }
  }
  if (judged == 0) return std::nullopt;
  return static_cast<double>(good) / static_cast<double>(judged);
}

const SystemCurve* EvalReport::find(Mode system) const {
  for (const auto& s : systems) {
    if (s.system == system) return &s;
  }
  return nullptr;
}

std::optional<double> EvalReport::improvement(Mode a, Mode b, std::size_t k) const {
  const SystemCurve* sa = find(a);
  const SystemCurve* sb = find(b);
  if (!sa || !sb || k == 0 || k > k_max) return std::nullopt;
  const auto& pa = sa->mean_precision[k - 1];
  const auto& pb = sb->mean_precision[k - 1];
  if (!pa || !pb || *pb == 0.0) return std::nullopt;
  return (*pa - *pb) / *pb;
}

EvalReport compare_systems(const SearchEngine& engine, std::span<const EvalQuery> queries,
                           const RelevanceJudgments& judgments, std::span<const Mode> systems,
                           std::size_t k_max, SearchParams base) {
  if (k_max == 0) throw std::invalid_argument("k_max must be at least 1");
  EvalReport report;
  report.k_max = k_max;
  report.query_count = queries.size();

  for (Mode system : systems) {
    using Curve = std::optional<std::vector<std::optional<double>>>;
    std::vector<Curve> curves(queries.size());

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto worker = [&]() {
      for (std::size_t qi = next++; qi < queries.size(); qi = next++) {
        SearchParams p = base;
        p.q = queries[qi].text;
        p.mode = system;
        p.k = k_max;
        p.grouped = false;
        if (tokenize_query(p.q).empty()) continue;
        SearchResult r;
        try {
          r = engine.search(p);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
        if (!r.answerable) continue;
        std::vector<std::string> ids;
        for (const auto& h : r.hits) ids.push_back(h.item_id);
        std::vector<std::optional<double>> curve(k_max);
        for (std::size_t k = 1; k <= k_max; ++k) {
          curve[k - 1] = precision_at_k(ids, judgments, queries[qi].id, k);
        }
        curves[qi] = std::move(curve);
      }
    };
    const std::size_t threads =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, queries.size()); ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);

    SystemCurve sc;
    sc.system = system;
    sc.mean_precision.assign(k_max, std::nullopt);
    std::vector<double> sums(k_max, 0.0);
    std::vector<std::size_t> counts(k_max, 0);
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      if (!curves[qi]) continue;
      ++sc.answerable;
      for (std::size_t k = 0; k < k_max; ++k) {
        if ((*curves[qi])[k]) {
          sums[k] += *(*curves[qi])[k];
          ++counts[k];
        }
      }
      sc.per_query[queries[qi].id] = std::move(*curves[qi]);
    }
    for (std::size_t k = 0; k < k_max; ++k) {
      if (counts[k] > 0) sc.mean_precision[k] = sums[k] / static_cast<double>(counts[k]);
    }
    report.systems.push_back(std::move(sc));
  }
  return report;
}

namespace {

std::string fmt_opt(const std::optional<double>& v, int precision = 4) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << *v;
  return s.str();
}

std::string fmt_pct(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::showpos << std::fixed << std::setprecision(2) << *v * 100.0 << '%';
  return s.str();
}

}  // namespace

void write_report_text(const EvalReport& report, std::ostream& out) {
  out << "queries: " << report.query_count << "\n";
  for (const auto& s : report.systems) {
    out << "  " << std::left << std::setw(10) << to_string(s.system) << " answerable "
        << s.answerable << "/" << report.query_count << "\n";
  }
  out << "\nmean precision@k\n";
  out << std::left << std::setw(6) << "k";
  for (const auto& s : report.systems) out << std::setw(12) << to_string(s.system);
  out << "\n";
  std::vector<std::size_t> ks;
  for (std::size_t k : {1, 5, 10, 15, 20, 25, 30, 40, 50}) {
    if (k <= report.k_max) ks.push_back(k);
  }
  if (ks.empty() || ks.back() != report.k_max) ks.push_back(report.k_max);
  for (std::size_t k : ks) {
    out << std::setw(6) << k;
    for (const auto& s : report.systems) out << std::setw(12) << fmt_opt(s.mean_precision[k - 1]);
    out << "\n";
  }

  if (report.systems.size() > 1) {
    out << "\nrelative improvement (row over column)\n";
    for (std::size_t k : {std::size_t{10}, report.k_max}) {
      if (k > report.k_max) continue;
      out << "@" << k << "\n";
      for (const auto& a : report.systems) {
        for (const auto& b : report.systems) {
          if (a.system == b.system) continue;
          out << "  " << std::setw(10) << to_string(a.system) << " vs " << std::setw(10)
              << to_string(b.system) << " " << fmt_pct(report.improvement(a.system, b.system, k))
              << "\n";
        }
      }
      if (k == report.k_max) break;
    }
  }
}

void write_report_table(const EvalReport& report, std::ostream& out) {
  std::vector<std::string> qids;
  for (const auto& s : report.systems) {
    for (const auto& [qid, curve] : s.per_query) qids.push_back(qid);
  }
  std::sort(qids.begin(), qids.end());
  qids.erase(std::unique(qids.begin(), qids.end()), qids.end());

  out << "system\tk\tmean";
  for (const auto& q : qids) out << '\t' << q;
  out << '\n';
  for (const auto& s : report.systems) {
    for (std::size_t k = 1; k <= report.k_max; ++k) {
      out << to_string(s.system) << '\t' << k << '\t' << fmt_opt(s.mean_precision[k - 1], 6);
      for (const auto& q : qids) {
        auto it = s.per_query.find(q);
        out << '\t' << (it == s.per_query.end() ? "" : fmt_opt(it->second[k - 1], 6));
      }
      out << '\n';
    }
  }
}

CoverageReport coverage_report(const Corpus& corpus, std::span<const EvalQuery> queries,
                               std::span<const CommunityVector> communities,
                               std::int64_t member_floor) {
  CoverageReport report;
  for (const auto& [id, item] : corpus.items) ++report.communities_per_item[item.communities.size()];

  report.query_count = queries.size();
  for (const auto& q : queries) {
    const std::vector<std::string> terms = tokenize_query(q.text);
    std::size_t matches = 0;
    std::size_t popular = 0;
    for (const auto& cv : communities) {
      const bool hit = std::any_of(terms.begin(), terms.end(),
                                   [&](const std::string& t) { return cv.vector.contains(t); });
      if (!hit) continue;
      ++matches;
      if (cv.member_count >= member_floor) ++popular;
    }
    report.matches_by_query[q.id] = matches;
    ++report.matching_communities_per_query[matches];
    if (matches == 0) {
      ++report.zero_match_queries;
    } else if (popular == 0) {
      ++report.sub_floor_only_queries;
    }
  }
  return report;
}

void write_coverage_text(const CoverageReport& report, std::ostream& out) {
  std::size_t items = 0;
  for (const auto& [b, n] : report.communities_per_item) items += n;
  out << "communities per item (" << items << " items)\n";
  for (const auto& [b, n] : report.communities_per_item) out << "  " << b << "\t" << n << "\n";
  out << "matching communities per query (" << report.query_count << " queries)\n";
  for (const auto& [b, n] : report.matching_communities_per_query) {
    out << "  " << b << "\t" << n << "\n";
  }
  out << "queries with no matching community: " << report.zero_match_queries << "\n";
  out << "queries with only sub-floor communities: " << report.sub_floor_only_queries << "\n";
}

}  // namespace conceptsearch
