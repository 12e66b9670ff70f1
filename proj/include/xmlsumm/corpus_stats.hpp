#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xmlsumm/doc_model.hpp"

namespace xmlsumm {

inline constexpr int kStatsFormatVersion = 1;

/// Smoothing count used for tag units (and text values) that do not appear
/// in the stats corpus; keeps typicality positive and specialty finite while
/// making unseen tags maximally "special".
inline constexpr double kUnseenSmoothing = 0.5;

/// Trim surrounding whitespace and ASCII-lowercase. Used to key text values
/// so that entity strings match across documents.
std::string normalize_value(std::string_view value);

/// Corpus-wide frequencies backing the rankers. Immutable once built; safe
/// for concurrent read-only use.
struct CorpusStats {
  int format_version = kStatsFormatVersion;
  std::int64_t num_documents = 0;
  std::map<TagUnit, std::int64_t> doc_frequency;
  std::map<TagUnit, std::int64_t> total_tag_count;
  std::map<std::pair<TagUnit, std::string>, std::int64_t> value_count;

  bool operator==(const CorpusStats&) const = default;

  bool contains(const TagUnit& unit) const { return doc_frequency.count(unit) > 0; }

  /// doc_frequency[T], or the smoothing count for unseen tag units.
  double doc_frequency_of(const TagUnit& unit) const;
  /// total_tag_count[T], or the smoothing count for unseen tag units.
  double total_count_of(const TagUnit& unit) const;
  /// value_count[(T, normalized value)], or the smoothing count when unseen.
  double value_count_of(const TagUnit& unit, std::string_view normalized_value) const;
};

/// Incremental aggregation; counts are associative, so builders may run over
/// partitions of a corpus and be merged.
class StatsBuilder {
 public:
  void add(const Document& doc);
  std::int64_t documents_added() const noexcept { return stats_.num_documents; }

  /// Errors with "empty corpus" if no document was added.
  CorpusStats build() &&;

 private:
  CorpusStats stats_;
};

CorpusStats build_stats(const std::vector<Document>& docs);
CorpusStats merge_stats(const CorpusStats& a, const CorpusStats& b);

/// total_tag_count[T] / num_documents. Errors with "unknown tag unit" when T
/// was never counted; callers wanting smoothing use total_count_of instead.
double average_count(const CorpusStats& stats, const TagUnit& unit);

/// Tab-separated UTF-8 stats file, LF line endings, records sorted for
/// deterministic output. See load_stats for the accepted format.
void save_stats(std::ostream& os, const CorpusStats& stats);
void save_stats_file(const std::string& path, const CorpusStats& stats);

CorpusStats load_stats(std::istream& is);
CorpusStats load_stats_file(const std::string& path);

}  // namespace xmlsumm
