#include "xmlsumm/tag_ranker.hpp"

#include <algorithm>

#include "xmlsumm/config.hpp"

namespace xmlsumm {

namespace {

int in_document_count(const TagUnit& unit, const Document& doc) {
  int count = 0;
  for (int id = 0; id < doc.node_count(); ++id) {
    if (!doc.node(id).is_leaf()) continue;
    if (doc.path_of(id) == unit.path) ++count;
  }
  return count;
}

}  // namespace

double TagImportance::probability_of(const TagUnit& unit) const {
  auto it = entries.find(unit);
  if (it == entries.end()) throw error("tag unit not ranked: " + unit.joined());
  return it->second;
}

double typicality(const TagUnit& unit, const CorpusStats& stats) {
  return stats.doc_frequency_of(unit) / static_cast<double>(stats.num_documents);
}

std::map<TagUnit, double> typicality_distribution(const std::vector<TagUnit>& tags,
                                                  const CorpusStats& stats) {
  if (tags.empty()) throw error("empty tag unit list");
  double sum = 0.0;
  std::map<TagUnit, double> dist;
  for (const TagUnit& t : tags) {
    double typ = typicality(t, stats);
    dist[t] = typ;
    sum += typ;
  }
  for (auto& [t, p] : dist) p /= sum;
  return dist;
}

double deviation(const TagUnit& unit, const Document& doc, const CorpusStats& stats) {
  int n = in_document_count(unit, doc);
  if (n < 1) throw error("tag absent from document: " + unit.joined());
  double avg = stats.total_count_of(unit) / static_cast<double>(stats.num_documents);
  return std::max(static_cast<double>(n) / avg, avg / static_cast<double>(n));
}

std::map<TagUnit, double> specialty_distribution(const std::vector<TagUnit>& tags,
                                                 const Document& doc, const CorpusStats& stats) {
  if (tags.empty()) throw error("empty tag unit list");
  double sum = 0.0;
  std::map<TagUnit, double> dist;
  for (const TagUnit& t : tags) {
    double dev = deviation(t, doc, stats);
    dist[t] = dev;
    sum += dev;
  }
  for (auto& [t, p] : dist) p /= sum;
  return dist;
}

TagImportance tag_importance(const Document& doc, const CorpusStats& stats, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw config_error("alpha must be in [0,1]");
  TagImportance importance;
  importance.alpha = alpha;
  importance.order = extract_tag_units(doc);

  auto p_typ = typicality_distribution(importance.order, stats);
  auto p_spe = specialty_distribution(importance.order, doc, stats);
  for (const TagUnit& t : importance.order)
    importance.entries[t] = alpha * p_typ.at(t) + (1.0 - alpha) * p_spe.at(t);
  return importance;
}

}  // namespace xmlsumm
