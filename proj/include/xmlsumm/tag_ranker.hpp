#pragma once

#include <map>
#include <vector>

#include "xmlsumm/corpus_stats.hpp"
#include "xmlsumm/doc_model.hpp"

namespace xmlsumm {

/// Probability distribution over a document's tag units under the
/// typicality/specialty mixture.
struct TagImportance {
  std::map<TagUnit, double> entries;
  std::vector<TagUnit> order;  // first-occurrence document order
  double alpha = 1.0;

  double probability_of(const TagUnit& unit) const;
};

/// Fraction of corpus documents containing the tag unit; smoothed for unseen
/// units, so always in (0, 1].
double typicality(const TagUnit& unit, const CorpusStats& stats);

/// Typicalities normalized to a distribution over `tags`.
std::map<TagUnit, double> typicality_distribution(const std::vector<TagUnit>& tags,
                                                  const CorpusStats& stats);

/// max(n / count_avg, count_avg / n) >= 1, where n is the in-document count.
/// Errors when the tag does not occur in the document.
double deviation(const TagUnit& unit, const Document& doc, const CorpusStats& stats);

/// Deviations normalized to a distribution over `tags` (all must occur in doc).
std::map<TagUnit, double> specialty_distribution(const std::vector<TagUnit>& tags,
                                                 const Document& doc, const CorpusStats& stats);

/// P(T) = alpha * P_typ(T) + (1 - alpha) * P_spe(T) over the document's
/// tag units.
TagImportance tag_importance(const Document& doc, const CorpusStats& stats, double alpha);

}  // namespace xmlsumm
