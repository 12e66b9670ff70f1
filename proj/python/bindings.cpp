#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xmlsumm/corpus_stats.hpp"
#include "xmlsumm/doc_model.hpp"
#include "xmlsumm/summarizer.hpp"
#include "xmlsumm/tag_ranker.hpp"

namespace py = pybind11;
using namespace xmlsumm;

namespace {

std::vector<std::vector<std::string>> tag_unit_paths(const Document& doc) {
  std::vector<std::vector<std::string>> out;
  for (const TagUnit& unit : extract_tag_units(doc)) out.push_back(unit.path);
  return out;
}

py::dict text_values(const Document& doc) {
  py::dict out;
  for (const auto& [tag, unit] : extract_text_units(doc)) {
    std::vector<std::string> values;
    for (const TextOccurrence& occ : unit.occurrences) values.push_back(occ.value);
    out[py::tuple(py::cast(tag.path))] = py::cast(values);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_xmlsumm, m) {
  m.doc() = "corpus-statistics-driven extractive summarization of data-oriented XML";

  py::register_exception<xmlsumm::error>(m, "Error");

  py::class_<Document>(m, "Document")
      .def_readonly("source_id", &Document::source_id)
      .def_property_readonly("node_count", &Document::node_count)
      .def("tag_units", &tag_unit_paths, "unique root-to-leaf paths in document order")
      .def("text_values", &text_values, "text values grouped per tag unit")
      .def("to_xml", [](const Document& doc) { return to_xml(doc); })
      .def("__repr__", [](const Document& doc) {
        return "<xmlsumm.Document '" + doc.source_id + "' with " +
               std::to_string(doc.node_count()) + " nodes>";
      });

  m.def(
      "parse_document",
      [](const std::string& xml, const std::string& source_id) {
        return parse_document(xml, source_id);
      },
      py::arg("xml"), py::arg("source_id") = "document");
  m.def("parse_file", &parse_file, py::arg("path"));

  py::class_<CorpusStats>(m, "CorpusStats")
      .def_readonly("num_documents", &CorpusStats::num_documents)
      .def("doc_frequency",
           [](const CorpusStats& stats, const std::vector<std::string>& path) {
             return stats.doc_frequency_of(TagUnit{path});
           })
      .def("average_count",
           [](const CorpusStats& stats, const std::vector<std::string>& path) {
             return average_count(stats, TagUnit{path});
           })
      .def("save", [](const CorpusStats& stats, const std::string& path) {
        save_stats_file(path, stats);
      })
      .def("__eq__", [](const CorpusStats& a, const CorpusStats& b) { return a == b; })
      .def("__repr__", [](const CorpusStats& stats) {
        return "<xmlsumm.CorpusStats over " + std::to_string(stats.num_documents) +
               " documents, " + std::to_string(stats.doc_frequency.size()) + " tag units>";
      });

  m.def("build_stats", [](const std::vector<Document>& docs) { return build_stats(docs); },
        py::arg("documents"));
  m.def("load_stats", &load_stats_file, py::arg("path"));

  py::class_<SummaryConfig>(m, "SummaryConfig")
      .def(py::init([](int size, double alpha, double beta, double lambda, double mu,
                       int centroid_m, std::vector<std::string> entity_paths,
                       int long_text_threshold, std::uint64_t seed, std::string stopword_file) {
             SummaryConfig config;
             config.size = size;
             config.alpha = alpha;
             config.beta = beta;
             config.lambda = lambda;
             config.mu = mu;
             config.centroid_m = centroid_m;
             config.entity_paths = std::move(entity_paths);
             config.long_text_threshold = long_text_threshold;
             config.seed = seed;
             config.stopword_file = std::move(stopword_file);
             config.validate();
             return config;
           }),
           py::arg("size") = 10, py::arg("alpha") = 1.0, py::arg("beta") = 0.7,
           py::arg("lambda_") = 0.49, py::arg("mu") = 0.48, py::arg("centroid_m") = 5,
           py::arg("entity_paths") = std::vector<std::string>{},
           py::arg("long_text_threshold") = 20, py::arg("seed") = 0,
           py::arg("stopword_file") = "")
      .def_readwrite("size", &SummaryConfig::size)
      .def_readwrite("alpha", &SummaryConfig::alpha)
      .def_readwrite("beta", &SummaryConfig::beta)
      .def_readwrite("lambda_", &SummaryConfig::lambda)
      .def_readwrite("mu", &SummaryConfig::mu)
      .def_readwrite("centroid_m", &SummaryConfig::centroid_m)
      .def_readwrite("entity_paths", &SummaryConfig::entity_paths)
      .def_readwrite("long_text_threshold", &SummaryConfig::long_text_threshold)
      .def_readwrite("seed", &SummaryConfig::seed)
      .def_readwrite("stopword_file", &SummaryConfig::stopword_file);

  m.def(
      "tag_importance",
      [](const Document& doc, const CorpusStats& stats, double alpha) {
        py::dict out;
        for (const auto& [tag, p] : tag_importance(doc, stats, alpha).entries)
          out[py::tuple(py::cast(tag.path))] = p;
        return out;
      },
      py::arg("document"), py::arg("stats"), py::arg("alpha") = 1.0);

  py::class_<Summary>(m, "Summary")
      .def_readonly("span_count", &Summary::span_count)
      .def_readonly("provenance", &Summary::provenance)
      .def_readonly("log", &Summary::selection_log)
      .def_property_readonly("doc", [](const Summary& s) { return s.doc; })
      .def_property_readonly("xml", [](const Summary& s) { return to_xml(s.doc); })
      .def("__repr__", [](const Summary& s) {
        return "<xmlsumm.Summary of '" + s.doc.source_id + "' with " +
               std::to_string(s.span_count) + " spans>";
      });

  m.def(
      "summarize",
      [](const Document& doc, const CorpusStats& stats, const SummaryConfig& config) {
        return summarize(doc, stats, config);
      },
      py::arg("document"), py::arg("stats"), py::arg("config"));
}
