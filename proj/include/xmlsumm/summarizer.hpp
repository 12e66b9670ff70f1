#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xmlsumm/config.hpp"
#include "xmlsumm/corpus_stats.hpp"
#include "xmlsumm/doc_model.hpp"
#include "xmlsumm/tag_ranker.hpp"
#include "xmlsumm/text_ranker.hpp"

namespace xmlsumm {

/// Hamilton (largest remainder) apportionment: integer targets summing to
/// exactly `budget`, proportional to `weights`. Remainder ties go to the
/// larger weight, then the smaller index.
std::vector<int> largest_remainder_targets(const std::vector<double>& weights, int budget);

struct AllocationStep {
  TagUnit tag;
  double weight;  // renormalized probability this round
  int target;     // apportioned share of the round budget
  int added;      // after capping at remaining availability
};

struct AllocationRound {
  int budget = 0;
  std::vector<AllocationStep> steps;
};

/// Per-tag span counts for one summary, plus the redistribution trace.
struct Allocation {
  std::map<TagUnit, int> counts;
  int requested_size = 0;
  std::vector<AllocationRound> rounds;

  int total() const;
};

/// Multi-round proportional redistribution: each round apportions the
/// remaining budget over still-available tags by their renormalized original
/// probabilities, capping at availability, until the budget is spent or
/// nothing is left.
Allocation allocate_budget(const TagImportance& importance,
                           const std::map<TagUnit, int>& available, int size);

/// Tag units identical except for the final label, with the parent element
/// instances under which at least two members co-occur.
struct SiblingGroup {
  std::vector<TagUnit> members;  // first-occurrence document order
  std::vector<int> instances;
};

std::vector<SiblingGroup> group_siblings(const Document& doc, const std::vector<TagUnit>& tags);

struct SelectedPair {
  TagUnit tag;
  int node_id = -1;
};

/// Chooses which occurrence fills each allocated span. Tied sibling ranks are
/// filled together from shared parent instances (a seeded pick decides which
/// member contributes its own top value); strictly lower-ranked siblings take
/// the value co-occurring with an already-selected higher-ranked one, falling
/// back to their own ranking (logged with a "fallback:" line) when no such
/// value exists.
std::vector<SelectedPair> select_content(const Document& doc, const Allocation& allocation,
                                         const TagImportance& importance,
                                         const std::vector<SiblingGroup>& groups,
                                         const std::map<TagUnit, TextImportance>& text_importances,
                                         const std::map<TagUnit, TextUnit>& text_units,
                                         std::uint64_t seed, double tie_epsilon,
                                         std::vector<std::string>* log);

/// A summary document plus the mapping back to the source. The tree is the
/// minimal subtree of the source spanning the selected leaves.
struct Summary {
  Document doc;
  std::vector<int> provenance;  // summary node id -> source node id
  int span_count = 0;
  std::vector<std::string> selection_log;
};

Summary assemble_summary(const Document& source, const std::vector<SelectedPair>& selected);

/// Full pipeline: units -> tag/text importance -> budget -> sibling-aware
/// selection -> assembly. Deterministic for fixed (doc, stats, config).
Summary summarize(const Document& doc, const CorpusStats& stats, const SummaryConfig& config);

}  // namespace xmlsumm
