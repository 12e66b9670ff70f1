#include "xmlsumm/text_ranker.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace xmlsumm {

namespace {

bool word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

// Selection/tie order within a unit is always by node id (document order),
// never by list position, so rankings are stable under permutation of the
// occurrence list.
int pick_best(const std::vector<double>& scores, const std::vector<char>& taken,
              const TextUnit& unit) {
  int best = -1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (taken[i]) continue;
    if (best < 0 || scores[i] > scores[static_cast<std::size_t>(best)] ||
        (scores[i] == scores[static_cast<std::size_t>(best)] &&
         unit.occurrences[i].node_id < unit.occurrences[static_cast<std::size_t>(best)].node_id)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<std::pair<int, double>> rank_by_probability(const std::vector<double>& probs,
                                                        const TextUnit& unit) {
  std::vector<std::pair<int, double>> ranked;
  ranked.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) ranked.emplace_back(static_cast<int>(i), probs[i]);
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return unit.occurrences[static_cast<std::size_t>(a.first)].node_id <
           unit.occurrences[static_cast<std::size_t>(b.first)].node_id;
  });
  return ranked;
}

void normalize(std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  for (double& v : values) v /= sum;
}

}  // namespace

int TermVector::count(std::string_view term) const {
  auto [lo, hi] = std::equal_range(terms.begin(), terms.end(), term);
  return static_cast<int>(hi - lo);
}

TermVector Tokenizer::tokenize(std::string_view value) const {
  TermVector out;
  std::size_t i = 0;
  while (i < value.size()) {
    if (!word_char(static_cast<unsigned char>(value[i]))) {
      ++i;
      continue;
    }
    std::string token;
    while (i < value.size() && word_char(static_cast<unsigned char>(value[i]))) {
      char c = value[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      token.push_back(c);
      ++i;
    }
    if (stop_.contains(token)) continue;
    out.terms.push_back(porter_stem(token));
  }
  std::sort(out.terms.begin(), out.terms.end());
  return out;
}

int similarity(const TermVector& x, const TermVector& y) {
  int common = 0;
  std::size_t i = 0, j = 0;
  while (i < x.terms.size() && j < y.terms.size()) {
    int cmp = x.terms[i].compare(y.terms[j]);
    if (cmp < 0) {
      ++i;
    } else if (cmp > 0) {
      ++j;
    } else {
      ++common;
      const std::string& t = x.terms[i];
      while (i < x.terms.size() && x.terms[i] == t) ++i;
      while (j < y.terms.size() && y.terms[j] == t) ++j;
    }
  }
  return common;
}

double relevance(const TermVector& value_terms, const CentroidQuery& query,
                 const std::vector<TermVector>& unit_terms) {
  double score = 0.0;
  for (const std::string& q : query.terms) {
    int tf = value_terms.count(q);
    if (tf == 0) continue;
    int containing = 0;
    for (const TermVector& other : unit_terms)
      if (other.contains(q)) ++containing;
    if (containing > 0) score += static_cast<double>(tf) / containing;
  }
  return score;
}

double TextImportance::probability_of(int occurrence_index) const {
  for (const auto& [index, p] : ranked)
    if (index == occurrence_index) return p;
  throw error("occurrence index not ranked: " + std::to_string(occurrence_index));
}

TextRanker::TextRanker(const SummaryConfig& config)
    : cfg_(config),
      tokenizer_(config.stopword_file.empty() ? Stopwords::builtin()
                                              : Stopwords::from_file(config.stopword_file)) {
  cfg_.validate();
  for (const std::string& path : cfg_.entity_paths) entities_.insert(TagUnit::from_joined(path));
}

std::vector<TermVector> TextRanker::unit_terms(const TextUnit& unit) const {
  std::vector<TermVector> out;
  out.reserve(unit.occurrences.size());
  bool entity = is_entity(unit.tag_unit);
  for (const TextOccurrence& occ : unit.occurrences) {
    if (entity) {
      out.push_back(TermVector{{normalize_value(occ.value)}});
    } else {
      out.push_back(tokenizer_.tokenize(occ.value));
    }
  }
  return out;
}

bool TextRanker::is_redundant(const TextUnit& unit) const {
  if (unit.size() < 2) return false;
  std::map<std::string, int> value_count;  // term -> #occurrences containing it
  for (const TermVector& terms : unit_terms(unit)) {
    std::string last;
    for (const std::string& t : terms.terms) {
      if (t == last) continue;  // distinct terms per occurrence
      last = t;
      if (++value_count[t] >= 2) return true;
    }
  }
  return false;
}

bool TextRanker::is_long_text(const TextUnit& unit) const {
  if (unit.empty()) return false;
  std::size_t total = 0;
  for (const TermVector& terms : unit_terms(unit)) total += terms.terms.size();
  double mean = static_cast<double>(total) / static_cast<double>(unit.size());
  return mean > static_cast<double>(cfg_.long_text_threshold);
}

CentroidQuery TextRanker::centroid_query(const TextUnit& unit, int m) const {
  if (m < 1) throw config_error("centroid-m must be >= 1");
  if (!is_redundant(unit)) throw error("centroid query undefined without redundancy");

  std::map<std::string, int> freq;
  for (const TermVector& terms : unit_terms(unit))
    for (const std::string& t : terms.terms) ++freq[t];

  std::vector<std::pair<std::string, int>> by_freq(freq.begin(), freq.end());
  std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  CentroidQuery query;
  for (const auto& [term, count] : by_freq) {
    if (static_cast<int>(query.terms.size()) >= m) break;
    query.terms.push_back(term);
  }
  return query;
}

TextImportance TextRanker::mmr_rank(const TextUnit& unit, double beta, int m) const {
  if (beta < 0.0 || beta > 1.0) throw config_error("beta must be in [0,1]");
  CentroidQuery query = centroid_query(unit, m);  // also checks redundancy

  std::vector<TermVector> terms = unit_terms(unit);
  std::size_t n = unit.occurrences.size();
  std::vector<double> rel(n);
  for (std::size_t i = 0; i < n; ++i) rel[i] = relevance(terms[i], query, terms);

  std::vector<char> taken(n, 0);
  std::vector<int> selection;       // occurrence indices in selection order
  std::vector<double> recorded(n);  // score at selection time

  int first = pick_best(rel, taken, unit);
  taken[static_cast<std::size_t>(first)] = 1;
  selection.push_back(first);
  recorded[static_cast<std::size_t>(first)] = rel[static_cast<std::size_t>(first)];

  while (selection.size() < n) {
    std::vector<double> score(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      int max_sim = 0;
      for (int j : selection)
        max_sim = std::max(max_sim, similarity(terms[i], terms[static_cast<std::size_t>(j)]));
      score[i] = beta * rel[i] - (1.0 - beta) * max_sim;
    }
    int pick = pick_best(score, taken, unit);
    taken[static_cast<std::size_t>(pick)] = 1;
    selection.push_back(pick);
    recorded[static_cast<std::size_t>(pick)] = score[static_cast<std::size_t>(pick)];
  }

  double min_score = *std::min_element(recorded.begin(), recorded.end());
  if (min_score < 0.0)
    for (double& s : recorded) s += -min_score + 1.0;
  double sum = 0.0;
  for (double s : recorded) sum += s;

  TextImportance result;
  result.kind = TextKind::redundant;
  result.ranked.reserve(n);
  for (int idx : selection)
    result.ranked.emplace_back(idx, recorded[static_cast<std::size_t>(idx)] / sum);
  return result;
}

std::vector<double> TextRanker::doc_frequency_distribution(const TextUnit& unit,
                                                           const Document& doc) const {
  if (unit.empty()) throw error("empty text unit");
  std::map<std::string, int> doc_counts;
  for (const Node& n : doc.nodes)
    if (n.is_leaf() && n.has_text()) ++doc_counts[normalize_value(n.text)];

  std::vector<double> counts;
  counts.reserve(unit.occurrences.size());
  for (const TextOccurrence& occ : unit.occurrences) {
    auto it = doc_counts.find(normalize_value(occ.value));
    counts.push_back(it == doc_counts.end() ? 0.0 : static_cast<double>(it->second));
  }
  double sum = 0.0;
  for (double c : counts) sum += c;
  if (sum <= 0.0) throw error("text unit does not belong to the document");
  for (double& c : counts) c /= sum;
  return counts;
}

std::vector<double> TextRanker::corpus_distribution(const TextUnit& unit,
                                                    const CorpusStats& stats) const {
  if (unit.empty()) throw error("empty text unit");
  std::vector<double> counts;
  counts.reserve(unit.occurrences.size());
  for (const TextOccurrence& occ : unit.occurrences)
    counts.push_back(stats.value_count_of(unit.tag_unit, normalize_value(occ.value)));
  normalize(counts);
  return counts;
}

TextImportance TextRanker::text_importance(const TextUnit& unit, const Document& doc,
                                           const CorpusStats& stats) const {
  if (unit.empty()) throw error("empty text unit");
  std::size_t n = unit.occurrences.size();

  bool redundant = is_redundant(unit);
  std::vector<double> context(n, 1.0 / static_cast<double>(n));
  if (redundant) {
    TextImportance mmr = mmr_rank(unit, cfg_.beta, cfg_.centroid_m);
    for (const auto& [index, p] : mmr.ranked) context[static_cast<std::size_t>(index)] = p;
  }

  // Long text keeps only the tag-context component.
  double lambda = is_long_text(unit) ? 1.0 : cfg_.lambda;
  double mu = is_long_text(unit) ? 0.0 : cfg_.mu;

  std::vector<double> mixed(n);
  if (lambda + mu < 1.0 || mu > 0.0) {
    std::vector<double> p_doc = doc_frequency_distribution(unit, doc);
    std::vector<double> p_corpus = corpus_distribution(unit, stats);
    for (std::size_t i = 0; i < n; ++i)
      mixed[i] = lambda * context[i] + mu * p_doc[i] + (1.0 - lambda - mu) * p_corpus[i];
  } else {
    mixed = context;
  }
  normalize(mixed);

  TextImportance result;
  result.kind = redundant ? TextKind::redundant : TextKind::non_redundant;
  result.ranked = rank_by_probability(mixed, unit);
  return result;
}

}  // namespace xmlsumm
