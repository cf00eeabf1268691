#include "conceptsearch/store.hpp"

#include <fstream>

#include <json.hpp>

namespace conceptsearch {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json entries_json(const TermVector& v) {
  json out = json::array();
  for (const auto& [t, w] : v.entries()) out.push_back(json::array({t, w}));
  return out;
}

TermVector entries_from(const json& j) {
  std::vector<TermVector::Entry> entries;
  for (const auto& e : j) entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
  return TermVector::from_entries(std::move(entries));
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw StoreError("cannot write " + p.string());
  return out;
}

template <typename Fn>
void read_lines(const fs::path& p, Fn fn) {
  std::ifstream in(p);
  if (!in) throw StoreError("cannot read " + p.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw StoreError(p.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

void save_index(const SearchEngine& engine, const fs::path& dir) {
  fs::create_directories(dir);
  const Corpus& corpus = engine.corpus();
  const ItemVectorIndex& index = engine.index();
  const IndexOptions& io = index.options();
  const CommunityConceptOptions& co = engine.concept_options();

  save_corpus(corpus, dir / "items.jsonl", dir / "communities.jsonl");

  {
    auto out = open_out(dir / "vectors.jsonl");
    for (ItemVectorIndex::DocId d = 0; d < index.item_count(); ++d) {
      json rec = {{"id", index.item_id(d)},
                  {"tfidf", entries_json(index.vector(d))},
                  {"tags", entries_json(index.tag_counts(d))}};
      out << rec.dump() << '\n';
    }
  }
  {
    auto out = open_out(dir / "concepts.jsonl");
    for (const auto& c : engine.community_concepts()) {
      json sources = json::array();
      for (const auto& [id, w] : c.source_communities) sources.push_back(json::array({id, w}));
      json rec = {{"id", c.id},
                  {"kind", to_string(c.kind)},
                  {"label", c.label},
                  {"vector", entries_json(c.vector)},
                  {"popularity", c.popularity},
                  {"member_count", c.member_count},
                  {"sources", sources},
                  {"members", c.member_item_ids}};
      out << rec.dump() << '\n';
    }
  }
  {
    json manifest = {
        {"format", "conceptsearch-index"},
        {"version", kIndexFormatVersion},
        {"created", corpus.provenance.loaded_at},
        {"sources", corpus.provenance.sources},
        {"index_options",
         {{"title", io.title}, {"description", io.description}, {"tag_boost", io.tag_boost}}},
        {"concept_options", {{"trim_sd", co.trim_sd}, {"sim_threshold", co.sim_threshold}}},
        {"counts",
         {{"items", corpus.items.size()},
          {"communities", corpus.communities.size()},
          {"concepts", engine.community_concepts().size()},
          {"terms", index.all_postings().size()}}}};
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
}

SearchEngine open_index(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw StoreError("index directory not found: " + dir.string());
  json manifest;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw StoreError("missing manifest.json in " + dir.string());
    try {
      manifest = json::parse(in);
    } catch (const json::exception& e) {
      throw StoreError("malformed manifest.json: " + std::string(e.what()));
    }
  }
  if (manifest.value("format", "") != "conceptsearch-index") {
    throw StoreError(dir.string() + " is not a conceptsearch index");
  }
  if (manifest.value("version", 0) != kIndexFormatVersion) {
    throw StoreError("unsupported index format version " +
                     std::to_string(manifest.value("version", 0)));
  }

  IndexOptions io;
  CommunityConceptOptions co;
  try {
    const json& jo = manifest.at("index_options");
    io.title = jo.at("title").get<bool>();
    io.description = jo.at("description").get<bool>();
    io.tag_boost = jo.at("tag_boost").get<double>();
    const json& jc = manifest.at("concept_options");
    co.trim_sd = jc.at("trim_sd").get<double>();
    co.sim_threshold = jc.at("sim_threshold").get<double>();
  } catch (const json::exception& e) {
    throw StoreError("malformed manifest.json: " + std::string(e.what()));
  }

  Corpus corpus;
  try {
    corpus = load_corpus(dir / "items.jsonl", dir / "communities.jsonl");
  } catch (const CorpusError& e) {
    throw StoreError(e.what());
  }
  corpus.provenance.sources = manifest.value("sources", std::vector<std::string>{});
  corpus.provenance.loaded_at = manifest.value("created", "");

  std::vector<std::string> ids;
  std::vector<TermVector> vectors;
  std::vector<TermVector> tags;
  read_lines(dir / "vectors.jsonl", [&](const json& rec) {
    ids.push_back(rec.at("id").get<std::string>());
    vectors.push_back(entries_from(rec.at("tfidf")));
    tags.push_back(entries_from(rec.at("tags")));
  });
  ItemVectorIndex index;
  try {
    index = ItemVectorIndex::from_parts(std::move(ids), std::move(vectors), std::move(tags), io);
  } catch (const std::invalid_argument& e) {
    throw StoreError(std::string("vectors.jsonl: ") + e.what());
  }
  if (index.item_count() != corpus.items.size()) {
    throw StoreError("vectors.jsonl does not cover the corpus");
  }

  std::vector<Concept> concepts;
  read_lines(dir / "concepts.jsonl", [&](const json& rec) {
    Concept c;
    c.id = rec.at("id").get<std::string>();
    c.kind = rec.at("kind").get<std::string>() == "cluster" ? ConceptKind::cluster
                                                             : ConceptKind::community;
    c.label = rec.at("label").get<std::vector<std::string>>();
    c.vector = entries_from(rec.at("vector"));
    c.popularity = rec.at("popularity").get<double>();
    c.member_count = rec.at("member_count").get<std::int64_t>();
    for (const auto& s : rec.at("sources")) {
      c.source_communities.emplace_back(s.at(0).get<std::string>(), s.at(1).get<double>());
    }
    c.member_item_ids = rec.at("members").get<std::vector<std::string>>();
    concepts.push_back(std::move(c));
  });

  return SearchEngine(std::move(corpus), std::move(index), std::move(concepts), co);
}

}  // namespace conceptsearch
