#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xmlsumm/config.hpp"
#include "xmlsumm/corpus_stats.hpp"
#include "xmlsumm/doc_model.hpp"

namespace xmlsumm {

/// Porter's suffix-stripping algorithm (the original 1980 rule set).
/// Input must be lowercase; words with characters outside a-z are returned
/// unchanged.
std::string porter_stem(std::string_view word);

class Stopwords {
 public:
  static const Stopwords& builtin();
  static Stopwords from_file(const std::string& path);
  static Stopwords from_words(std::vector<std::string> words);

  bool contains(const std::string& word) const { return words_.count(word) > 0; }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

/// Multiset of normalized terms, kept sorted.
struct TermVector {
  std::vector<std::string> terms;

  bool empty() const noexcept { return terms.empty(); }
  int size() const noexcept { return static_cast<int>(terms.size()); }
  int count(std::string_view term) const;
  bool contains(std::string_view term) const { return count(term) > 0; }

  bool operator==(const TermVector&) const = default;
};

/// Lowercases, strips punctuation, drops stopwords, stems.
class Tokenizer {
 public:
  Tokenizer() : stop_(Stopwords::builtin()) {}
  explicit Tokenizer(Stopwords stopwords) : stop_(std::move(stopwords)) {}

  TermVector tokenize(std::string_view value) const;
  const Stopwords& stopwords() const { return stop_; }

 private:
  Stopwords stop_;
};

/// The top-m most frequent terms of a text unit, used as a pseudo-query.
struct CentroidQuery {
  std::vector<std::string> terms;  // descending frequency, ties lexicographic

  bool empty() const noexcept { return terms.empty(); }
};

/// |terms(x) ∩ terms(y)| over distinct terms; symmetric.
int similarity(const TermVector& x, const TermVector& y);

/// Sum over query terms of tf(q in value) / #values-containing-q.
double relevance(const TermVector& value_terms, const CentroidQuery& query,
                 const std::vector<TermVector>& unit_terms);

enum class TextKind { redundant, non_redundant };

/// Probability distribution over one text unit's occurrences, ranked
/// descending (ties broken by document order).
struct TextImportance {
  std::vector<std::pair<int, double>> ranked;  // (occurrence index, probability)
  TextKind kind = TextKind::non_redundant;

  double probability_of(int occurrence_index) const;
};

/// Ranks text values within a text unit: centroid-query relevance with MMR
/// diversification for internally redundant units, and the document/corpus
/// frequency mixture otherwise.
class TextRanker {
 public:
  explicit TextRanker(const SummaryConfig& config);

  bool is_entity(const TagUnit& unit) const { return entities_.count(unit) > 0; }

  /// Term vectors per occurrence; entity units yield the whole normalized
  /// value as a single term.
  std::vector<TermVector> unit_terms(const TextUnit& unit) const;

  /// True iff some term (whole value, for entity units) occurs in at least
  /// two distinct occurrences.
  bool is_redundant(const TextUnit& unit) const;

  /// Mean terms per occurrence above the configured threshold.
  bool is_long_text(const TextUnit& unit) const;

  CentroidQuery centroid_query(const TextUnit& unit, int m) const;

  TextImportance mmr_rank(const TextUnit& unit, double beta, int m) const;

  /// P(t|D): occurrences of each normalized value anywhere in the document,
  /// normalized over this unit.
  std::vector<double> doc_frequency_distribution(const TextUnit& unit, const Document& doc) const;

  /// P(t|C): corpus value counts (0.5 for unseen), normalized over this unit.
  std::vector<double> corpus_distribution(const TextUnit& unit, const CorpusStats& stats) const;

  TextImportance text_importance(const TextUnit& unit, const Document& doc,
                                 const CorpusStats& stats) const;

  const Tokenizer& tokenizer() const { return tokenizer_; }
  const SummaryConfig& config() const { return cfg_; }

 private:
  SummaryConfig cfg_;
  Tokenizer tokenizer_;
  std::set<TagUnit> entities_;
};

}  // namespace xmlsumm
