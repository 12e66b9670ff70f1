#include <fstream>

#include "xmlsumm/text_ranker.hpp"

namespace xmlsumm {

namespace {

// Mirrors data/stopwords_en.txt; a test keeps the two in sync.
constexpr const char* kBuiltinStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she",
    "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing", "would",
    "should", "could", "ought", "cannot", "a", "an", "the", "and", "but", "if",
    "or", "because", "as", "until", "while", "of", "at", "by", "for", "with",
    "about", "against", "between", "into", "through", "during", "before",
    "after", "above", "below", "to", "from", "up", "down", "in", "out", "on",
    "off", "over", "under", "again", "further", "then", "once", "here",
    "there", "when", "where", "why", "how", "all", "any", "both", "each",
    "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very",
};

}  // namespace

const Stopwords& Stopwords::builtin() {
  static const Stopwords instance = [] {
    std::vector<std::string> words(std::begin(kBuiltinStopwords), std::end(kBuiltinStopwords));
    return from_words(std::move(words));
  }();
  return instance;
}

Stopwords Stopwords::from_words(std::vector<std::string> words) {
  Stopwords s;
  for (std::string& w : words) s.words_.insert(std::move(w));
  return s;
}

Stopwords Stopwords::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open stopword file: " + path);
  Stopwords s;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (!line.empty()) s.words_.insert(line);
  }
  return s;
}

}  // namespace xmlsumm
