#include "conceptsearch/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "conceptsearch/text.hpp"

namespace conceptsearch {

using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string field_string(const json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return {};
  return it->get<std::string>();
}

std::vector<std::string> field_strings(const json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return {};
  return it->get<std::vector<std::string>>();
}

template <typename Parse>
void read_records(const std::filesystem::path& path, Parse parse) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json rec = json::parse(line);
      if (!rec.is_object()) throw CorpusError("record is not an object");
      parse(rec);
    } catch (const json::exception& e) {
      throw CorpusError(path.string() + ":" + std::to_string(lineno) +
                        ": malformed record: " + e.what());
    } catch (const CorpusError& e) {
      throw CorpusError(path.string() + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void normalize_tags(TaggedItem& item) {
  std::vector<std::string> tags;
  tags.reserve(item.tags.size());
  for (const auto& raw : item.tags) {
    std::string t = normalize_tag(raw);
    if (!t.empty()) tags.push_back(std::move(t));
  }
  item.tags = std::move(tags);
}

void reconcile(Corpus& corpus) {
  for (auto& [id, item] : corpus.items) {
    for (const auto& cid : item.communities) {
      auto it = corpus.communities.find(cid);
      if (it != corpus.communities.end()) it->second.item_ids.push_back(id);
    }
  }
  for (auto& [cid, comm] : corpus.communities) {
    for (const auto& iid : comm.item_ids) {
      auto it = corpus.items.find(iid);
      if (it != corpus.items.end()) it->second.communities.push_back(cid);
    }
  }
  for (auto& [id, item] : corpus.items) sort_unique(item.communities);
  for (auto& [cid, comm] : corpus.communities) sort_unique(comm.item_ids);
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& items_path,
                   const std::filesystem::path& communities_path,
                   const LoadOptions& options) {
  Corpus corpus;
  read_records(items_path, [&](const json& rec) {
    TaggedItem item;
    item.id = field_string(rec, "id");
    item.title = field_string(rec, "title");
    item.description = field_string(rec, "description");
    item.tags = field_strings(rec, "tags");
    item.owner = field_string(rec, "owner");
    item.communities = field_strings(rec, "communities");
    normalize_tags(item);
    std::string id = item.id;
    if (!corpus.items.emplace(id, std::move(item)).second) {
      throw CorpusError("duplicate item id \"" + id + "\"");
    }
  });
  read_records(communities_path, [&](const json& rec) {
    Community comm;
    comm.id = field_string(rec, "id");
    comm.title = field_string(rec, "title");
    comm.description = field_string(rec, "description");
    if (auto it = rec.find("member_count"); it != rec.end() && !it->is_null()) {
      comm.member_count = it->get<std::int64_t>();
    }
    comm.item_ids = field_strings(rec, "item_ids");
    std::string id = comm.id;
    if (!corpus.communities.emplace(id, std::move(comm)).second) {
      throw CorpusError("duplicate community id \"" + id + "\"");
    }
  });

  ValidationReport report = validate(corpus);
  if (!options.strict_membership) {
    std::erase_if(report, [](const Violation& v) {
      return v.kind == Violation::Kind::membership_mismatch;
    });
  }
  if (!report.empty()) {
    std::ostringstream msg;
    msg << "invalid corpus: " << report.front().message;
    if (report.size() > 1) msg << " (and " << report.size() - 1 << " more)";
    throw CorpusError(msg.str());
  }
  reconcile(corpus);

  corpus.provenance.sources = {items_path.string(), communities_path.string()};
  corpus.provenance.loaded_at = utc_now();
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& items_path,
                 const std::filesystem::path& communities_path) {
  std::ofstream items(items_path);
  if (!items) throw CorpusError("cannot write " + items_path.string());
  for (const auto& [id, item] : corpus.items) {
    json rec = {{"id", item.id},
                {"title", item.title},
                {"description", item.description},
                {"tags", item.tags},
                {"owner", item.owner},
                {"communities", item.communities}};
    items << rec.dump() << '\n';
  }
  std::ofstream comms(communities_path);
  if (!comms) throw CorpusError("cannot write " + communities_path.string());
  for (const auto& [id, comm] : corpus.communities) {
    json rec = {{"id", comm.id},
                {"title", comm.title},
                {"description", comm.description},
                {"member_count", comm.member_count},
                {"item_ids", comm.item_ids}};
    comms << rec.dump() << '\n';
  }
  if (!items || !comms) throw CorpusError("write failed");
}

void normalize_corpus(Corpus& corpus) {
  for (auto& [id, item] : corpus.items) normalize_tags(item);
  reconcile(corpus);
}

ValidationReport validate(const Corpus& corpus) {
  using Kind = Violation::Kind;
  ValidationReport report;
  std::set<std::pair<std::string_view, std::string_view>> item_side;
  std::set<std::pair<std::string_view, std::string_view>> community_side;
  for (const auto& [key, item] : corpus.items) {
    for (const auto& cid : item.communities) item_side.emplace(item.id, cid);
  }
  for (const auto& [key, comm] : corpus.communities) {
    for (const auto& iid : comm.item_ids) community_side.emplace(iid, comm.id);
  }
  for (const auto& [key, item] : corpus.items) {
    if (item.id.empty()) {
      report.push_back({Kind::empty_id, "item with empty id"});
    }
    for (const auto& cid : item.communities) {
      auto it = corpus.communities.find(cid);
      if (it == corpus.communities.end()) {
        report.push_back({Kind::dangling_community,
                          "item \"" + item.id + "\" references unknown community \"" +
                              cid + "\""});
      } else if (!community_side.contains({item.id, cid})) {
        report.push_back({Kind::membership_mismatch,
                          "item \"" + item.id + "\" lists community \"" + cid +
                              "\" but the community does not list it"});
      }
    }
  }
  for (const auto& [key, comm] : corpus.communities) {
    if (comm.id.empty()) {
      report.push_back({Kind::empty_id, "community with empty id"});
    }
    if (comm.member_count < 0) {
      report.push_back({Kind::negative_member_count,
                        "community \"" + comm.id + "\" has negative member_count " +
                            std::to_string(comm.member_count)});
    }
    for (const auto& iid : comm.item_ids) {
      auto it = corpus.items.find(iid);
      if (it == corpus.items.end()) {
        report.push_back({Kind::dangling_item, "community \"" + comm.id +
                                                   "\" references unknown item \"" +
                                                   iid + "\""});
      } else if (!item_side.contains({iid, comm.id})) {
        report.push_back({Kind::membership_mismatch,
                          "community \"" + comm.id + "\" lists item \"" + iid +
                              "\" but the item does not list it"});
      }
    }
  }
  return report;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.item_count = corpus.items.size();
  stats.community_count = corpus.communities.size();
  std::set<std::string> owners;
  for (const auto& [id, item] : corpus.items) {
    if (!item.owner.empty()) owners.insert(item.owner);
    ++stats.communities_per_item[item.communities.size()];
  }
  stats.user_count = owners.size();
  if (stats.item_count > 0) {
    auto it = stats.communities_per_item.find(0);
    const std::size_t zero = it == stats.communities_per_item.end() ? 0 : it->second;
    stats.zero_community_fraction =
        static_cast<double>(zero) / static_cast<double>(stats.item_count);
  }
  return stats;
}

}  // namespace conceptsearch
