#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "conceptsearch/engine.hpp"
#include "conceptsearch/serialize.hpp"
#include "conceptsearch/store.hpp"
#include "conceptsearch/synth.hpp"
#include "conceptsearch/text.hpp"

namespace py = pybind11;
namespace cs = conceptsearch;

namespace {

cs::SearchParams make_params(const std::string& q, const std::string& mode, std::size_t k,
                             double alpha, double lambda, std::size_t top_concepts, bool grouped,
                             std::size_t clusters, std::size_t lsi_rank, std::uint64_t seed,
                             bool adaptive_alpha) {
  cs::SearchParams p;
  p.q = q;
  p.mode = cs::parse_mode(mode);
  p.k = k;
  p.alpha = alpha;
  p.lambda = lambda;
  p.top_concepts = top_concepts;
  p.grouped = grouped;
  p.cluster.clusters = clusters;
  p.cluster.lsi_rank = lsi_rank;
  p.cluster.seed = seed;
  p.adaptive_alpha = adaptive_alpha;
  return p;
}

}  // namespace

PYBIND11_MODULE(_conceptsearch, m) {
  m.doc() = "Concept-based tag search core";

  py::register_exception<cs::CorpusError>(m, "CorpusError", PyExc_ValueError);
  py::register_exception<cs::StoreError>(m, "StoreError", PyExc_OSError);

  py::class_<cs::SearchEngine, std::shared_ptr<cs::SearchEngine>>(m, "Engine")
      .def_static(
          "from_files",
          [](const std::filesystem::path& items, const std::filesystem::path& communities,
             bool strict) {
            return std::make_shared<cs::SearchEngine>(cs::load_corpus(items, communities, {strict}));
          },
          py::arg("items"), py::arg("communities"), py::arg("strict") = false)
      .def_static(
          "open",
          [](const std::filesystem::path& dir) {
            return std::make_shared<cs::SearchEngine>(cs::open_index(dir));
          },
          py::arg("index_dir"))
      .def(
          "save", [](const cs::SearchEngine& e, const std::filesystem::path& dir) { cs::save_index(e, dir); },
          py::arg("index_dir"))
      .def(
          "search_json",
          [](const cs::SearchEngine& e, const std::string& q, const std::string& mode, std::size_t k,
             double alpha, double lambda, std::size_t top_concepts, bool grouped,
             std::size_t clusters, std::size_t lsi_rank, std::uint64_t seed, bool adaptive_alpha) {
            const auto p = make_params(q, mode, k, alpha, lambda, top_concepts, grouped, clusters,
                                       lsi_rank, seed, adaptive_alpha);
            py::gil_scoped_release release;
            return cs::search_result_json(e.search(p), e.corpus()).dump();
          },
          py::arg("q"), py::arg("mode") = "community", py::arg("k") = 10, py::arg("alpha") = 1.0,
          py::arg("lambda_") = 0.5, py::arg("top_concepts") = 10, py::arg("grouped") = false,
          py::arg("clusters") = 5, py::arg("lsi_rank") = 50, py::arg("seed") = 42,
          py::arg("adaptive_alpha") = true)
      .def(
          "concepts_json",
          [](const cs::SearchEngine& e, const std::string& q, std::size_t top, const std::string& mode) {
            auto p = make_params(q, mode, 10, 1.0, 0.5, top, false, 5, 50, 42, true);
            return cs::concepts_json(p, e.concepts_for(p)).dump();
          },
          py::arg("q"), py::arg("top") = 5, py::arg("mode") = "community")
      .def("stats_json", [](const cs::SearchEngine& e) { return cs::stats_json(e.stats()).dump(); })
      .def_property_readonly("item_count", [](const cs::SearchEngine& e) { return e.index().item_count(); });

  m.def(
      "write_benchmark",
      [](const std::filesystem::path& out, std::uint64_t seed, std::size_t pivots) {
        cs::SynthOptions o;
        o.seed = seed;
        o.pivots = pivots;
        cs::write_benchmark(cs::generate_ambiguity_benchmark(o), out);
      },
      py::arg("out_dir"), py::arg("seed") = 7, py::arg("pivots") = 6);
  m.def("normalize_tag", &cs::normalize_tag, py::arg("raw"));
  m.def("tokenize_query", &cs::tokenize_query, py::arg("query"));
}
