#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xmlsumm/errors.hpp"

namespace xmlsumm {

/// All tunables of the summarization pipeline. Defaults follow the values
/// that worked best in evaluation: typicality-only tag ranking and a text
/// mixture giving tag and document context nearly equal weight.
struct SummaryConfig {
  int size = 10;               // span budget (tag-text pairs)
  double alpha = 1.0;          // tag mixture: typicality vs specialty
  double beta = 0.7;           // MMR relevance/diversity trade-off
  double lambda = 0.49;        // text mixture: tag-context weight
  double mu = 0.48;            // text mixture: document weight
  int centroid_m = 5;          // centroid query size
  std::vector<std::string> entity_paths;  // tag paths ranked as whole values
  int long_text_threshold = 20;  // mean terms per value above which a unit is long text
  double tie_epsilon = 1e-9;   // rank ties for sibling handling
  std::uint64_t seed = 0;      // seeded choice among tied siblings
  std::string stopword_file;   // empty = built-in English list

  /// Throws config_error naming the violated constraint.
  void validate() const;
};

/// Applies "key = value" lines (UTF-8, '#' comments). Keys match the CLI
/// flag names; unknown keys are an error.
void apply_config_file(SummaryConfig& config, const std::string& path);

}  // namespace xmlsumm
