#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "conceptsearch/engine.hpp"
#include "conceptsearch/eval.hpp"
#include "conceptsearch/serialize.hpp"
#include "conceptsearch/service.hpp"
#include "conceptsearch/store.hpp"
#include "conceptsearch/synth.hpp"

namespace cs = conceptsearch;

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<cs::Mode> parse_systems(const std::string& list) {
  std::vector<cs::Mode> systems;
  std::stringstream in(list);
  for (std::string name; std::getline(in, name, ',');) {
    if (!name.empty()) systems.push_back(cs::parse_mode(name));
  }
  if (systems.empty()) throw std::invalid_argument("--systems is empty");
  return systems;
}

void print_hits(const cs::SearchResult& result, const cs::Corpus& corpus) {
  std::cout << "query: " << result.query.raw << "  mode: " << cs::to_string(result.query.mode)
            << "  alpha_used: " << result.alpha_used << "  candidates: " << result.total_candidates
            << (result.answerable ? "" : "  (no relevant concept)") << "\n";
  std::size_t rank = 0;
  for (const auto& hit : result.hits) {
    const auto& item = corpus.items.at(hit.item_id);
    std::cout << std::setw(3) << ++rank << "  " << std::fixed << std::setprecision(6) << hit.score
              << "  " << hit.item_id << "  " << item.title << "  [" << join(item.tags, ", ")
              << "]\n";
    std::cout.unsetf(std::ios::floatfield);
  }
}

void print_groups(const cs::SearchResult& result, const cs::Corpus& corpus) {
  for (const auto& g : result.groups) {
    std::cout << g.concept_id << "  {" << join(g.label, ", ") << "}  P(Q|C)=" << g.query_score
              << "  P(C)=" << g.popularity << "\n";
    for (const auto& it : g.items) {
      std::cout << "    " << std::fixed << std::setprecision(6) << it.score << "  " << it.item_id
                << "  " << corpus.items.at(it.item_id).title << "\n";
      std::cout.unsetf(std::ios::floatfield);
    }
  }
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) return {bind, 8080};
  std::string host = bind.substr(0, colon);
  if (host.empty()) host = "0.0.0.0";
  return {host, std::stoi(bind.substr(colon + 1))};
}

int serve(const std::string& index_dir, const std::string& bind) {
  auto [host, port] = parse_bind(bind);
  auto engine = std::make_shared<const cs::SearchEngine>(cs::open_index(index_dir));
  cs::SearchService service(engine);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::jthread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });

  std::cerr << "serving " << index_dir << " on " << host << ":" << port << "\n";
  const bool ok = service.listen(host, port);
  pthread_kill(watcher.native_handle(), SIGTERM);  // wakes the watcher on a failed bind
  if (!ok) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept-based tag search over community-curated image collections"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Build an index directory from JSONL files");
  std::string items_path, communities_path, out_dir;
  bool strict = false;
  ingest->add_option("--items", items_path, "Items JSONL")->required();
  ingest->add_option("--communities", communities_path, "Communities JSONL")->required();
  ingest->add_option("--out", out_dir, "Index directory")->required();
  ingest->add_flag("--strict", strict, "Reject one-sided membership links");

  // stats
  auto* stats = app.add_subcommand("stats", "Print corpus statistics as JSON");
  std::string index_dir;
  stats->add_option("INDEXDIR", index_dir)->required();

  // search
  auto* search = app.add_subcommand("search", "Query an index");
  cs::SearchParams sp;
  std::string mode_name = "community";
  bool as_json = false;
  search->add_option("INDEXDIR", index_dir)->required();
  search->add_option("--q", sp.q, "Query")->required();
  search->add_option("--mode", mode_name, "plain, cluster or community")->capture_default_str();
  search->add_option("--k", sp.k)->capture_default_str();
  search->add_option("--alpha", sp.alpha)->capture_default_str();
  search->add_option("--lambda", sp.lambda)->capture_default_str();
  search->add_option("--top-concepts", sp.top_concepts)->capture_default_str();
  search->add_flag("--grouped", sp.grouped);
  search->add_option("--clusters", sp.cluster.clusters)->capture_default_str();
  search->add_option("--lsi-rank", sp.cluster.lsi_rank)->capture_default_str();
  search->add_option("--seed", sp.cluster.seed)->capture_default_str();
  search->add_flag("--json", as_json, "Print the same payload as GET /search");

  // concepts
  auto* concepts = app.add_subcommand("concepts", "List the concepts a query selects");
  std::size_t top = 5;
  concepts->add_option("INDEXDIR", index_dir)->required();
  concepts->add_option("--q", sp.q)->required();
  concepts->add_option("--top", top)->capture_default_str();
  concepts->add_option("--mode", mode_name)->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluation tools");
  eval->require_subcommand(1);
  auto* eval_run = eval->add_subcommand("run", "Compare systems on judged queries");
  std::string queries_path, qrels_path, systems = "plain,cluster,community", report_path;
  std::size_t kmax = 50;
  bool adaptive = false;
  eval_run->add_option("INDEXDIR", index_dir)->required();
  eval_run->add_option("--queries", queries_path)->required();
  eval_run->add_option("--qrels", qrels_path)->required();
  eval_run->add_option("--systems", systems)->capture_default_str();
  eval_run->add_option("--kmax", kmax)->capture_default_str();
  eval_run->add_option("--out", report_path, "Text report; the table goes next to it as .tsv")
      ->required();
  eval_run->add_option("--alpha", sp.alpha)->capture_default_str();
  eval_run->add_option("--lambda", sp.lambda)->capture_default_str();
  eval_run->add_option("--top-concepts", sp.top_concepts)->capture_default_str();
  eval_run->add_option("--clusters", sp.cluster.clusters)->capture_default_str();
  eval_run->add_option("--seed", sp.cluster.seed)->capture_default_str();
  eval_run->add_flag("--adaptive-alpha", adaptive, "Fall back to plain when concepts are tiny");

  auto* eval_synth = eval->add_subcommand("synth", "Write the synthetic ambiguity benchmark");
  cs::SynthOptions synth;
  eval_synth->add_option("--seed", synth.seed)->capture_default_str();
  eval_synth->add_option("--pivots", synth.pivots)->capture_default_str();
  eval_synth->add_option("--out", out_dir)->required();

  auto* eval_cov = eval->add_subcommand("coverage", "Community coverage of a query set");
  eval_cov->add_option("INDEXDIR", index_dir)->required();
  eval_cov->add_option("--queries", queries_path)->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  std::string bind = "127.0.0.1:8080";
  serve_cmd->add_option("--index", index_dir)->required();
  serve_cmd->add_option("--bind", bind, "host:port")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      cs::Corpus corpus = cs::load_corpus(items_path, communities_path, {strict});
      cs::SearchEngine engine(std::move(corpus));
      cs::save_index(engine, out_dir);
      const auto st = engine.stats();
      std::cerr << "indexed " << st.item_count << " items, " << st.community_count
                << " communities, " << engine.community_concepts().size() << " concepts\n";
    } else if (*stats) {
      std::cout << cs::stats_json(cs::open_index(index_dir).stats()).dump() << "\n";
    } else if (*search) {
      sp.mode = cs::parse_mode(mode_name);
      const cs::SearchEngine engine = cs::open_index(index_dir);
      const cs::SearchResult result = engine.search(sp);
      if (as_json) {
        std::cout << cs::search_result_json(result, engine.corpus()).dump() << "\n";
      } else if (sp.grouped) {
        print_groups(result, engine.corpus());
      } else {
        print_hits(result, engine.corpus());
      }
    } else if (*concepts) {
      sp.mode = cs::parse_mode(mode_name);
      sp.top_concepts = top;
      const cs::SearchEngine engine = cs::open_index(index_dir);
      for (const auto& c : engine.concepts_for(sp)) {
        std::cout << c.id << "  {" << join(c.label, ", ") << "}  P(Q|C)=" << c.query_score
                  << "  popularity=" << c.popularity << "  members=" << c.member_count << "\n";
      }
    } else if (*eval_run) {
      const cs::SearchEngine engine = cs::open_index(index_dir);
      const auto queries = cs::load_queries(queries_path);
      const auto qrels = cs::RelevanceJudgments::load(qrels_path);
      const auto modes = parse_systems(systems);
      sp.adaptive_alpha = adaptive;
      const auto report = cs::compare_systems(engine, queries, qrels, modes, kmax, sp);
      std::ofstream text(report_path);
      if (!text) throw std::runtime_error("cannot write " + report_path);
      cs::write_report_text(report, text);
      std::filesystem::path table_path(report_path);
      table_path.replace_extension(".tsv");
      std::ofstream table(table_path);
      if (!table) throw std::runtime_error("cannot write " + table_path.string());
      cs::write_report_table(report, table);
      cs::write_report_text(report, std::cout);
    } else if (*eval_synth) {
      cs::write_benchmark(cs::generate_ambiguity_benchmark(synth), out_dir);
    } else if (*eval_cov) {
      const cs::SearchEngine engine = cs::open_index(index_dir);
      const auto queries = cs::load_queries(queries_path);
      cs::write_coverage_text(
          cs::coverage_report(engine.corpus(), queries, engine.community_vectors()), std::cout);
    } else if (*serve_cmd) {
      return serve(index_dir, bind);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
