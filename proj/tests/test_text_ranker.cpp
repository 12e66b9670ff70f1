#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "test_support.hpp"
#include "xmlsumm/text_ranker.hpp"

using namespace xmlsumm;
using namespace testsupport;

namespace {

TextUnit unit_of(const Document& doc, std::vector<std::string> path) {
  return extract_text_units(doc).at(TagUnit{std::move(path)});
}

// TEXT = {"alpha beta", "beta gamma", "alpha alpha"} from three sibling leaves
Document abc_doc() {
  return doc_from("<r><t>alpha beta</t><t>beta gamma</t><t>alpha alpha</t></r>");
}

TextRanker default_ranker() { return TextRanker(SummaryConfig{}); }

}  // namespace

TEST_CASE("porter stemmer golden vectors") {
  CHECK(porter_stem("caresses") == "caress");
  CHECK(porter_stem("ponies") == "poni");
  CHECK(porter_stem("ties") == "ti");
  CHECK(porter_stem("cats") == "cat");
  CHECK(porter_stem("feed") == "feed");
  CHECK(porter_stem("agreed") == "agre");
  CHECK(porter_stem("plastered") == "plaster");
  CHECK(porter_stem("motoring") == "motor");
  CHECK(porter_stem("sing") == "sing");
  CHECK(porter_stem("sized") == "size");
  CHECK(porter_stem("hopping") == "hop");
  CHECK(porter_stem("falling") == "fall");
  CHECK(porter_stem("filing") == "file");
  CHECK(porter_stem("happy") == "happi");
  CHECK(porter_stem("sky") == "sky");
  CHECK(porter_stem("relational") == "relat");
  CHECK(porter_stem("conditional") == "condit");
  CHECK(porter_stem("rational") == "ration");
  CHECK(porter_stem("digitizer") == "digit");
  CHECK(porter_stem("operator") == "oper");
  CHECK(porter_stem("feudalism") == "feudal");
  CHECK(porter_stem("decisiveness") == "decis");
  CHECK(porter_stem("hopefulness") == "hope");
  CHECK(porter_stem("formaliti") == "formal");
  CHECK(porter_stem("sensibiliti") == "sensibl");
  CHECK(porter_stem("triplicate") == "triplic");
  CHECK(porter_stem("formative") == "form");
  CHECK(porter_stem("electriciti") == "electr");
  CHECK(porter_stem("adjustable") == "adjust");
  CHECK(porter_stem("replacement") == "replac");
  CHECK(porter_stem("adoption") == "adopt");
  CHECK(porter_stem("communism") == "commun");
  CHECK(porter_stem("activate") == "activ");
  CHECK(porter_stem("effective") == "effect");
  CHECK(porter_stem("controlling") == "control");
  CHECK(porter_stem("oscillators") == "oscil");
  CHECK(porter_stem("icebergs") == "iceberg");
  CHECK(porter_stem("melted") == "melt");
  // short words and non-alphabetic tokens pass through
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("2003") == "2003");
}

TEST_CASE("tokenize lowercases, strips punctuation, drops stopwords, stems") {
  Tokenizer tok;
  CHECK(tok.tokenize("The icebergs melted") == TermVector{{"iceberg", "melt"}});
  CHECK(tok.tokenize("") == TermVector{});
  CHECK(tok.tokenize("and the of") == TermVector{});
  CHECK(tok.tokenize("Roger'Verbal'Kint") == TermVector{{"kint", "roger", "verbal"}});
  // multiset keeps duplicates
  CHECK(tok.tokenize("alpha alpha beta") == TermVector{{"alpha", "alpha", "beta"}});
  // normalization is idempotent on its own output
  for (const std::string& term : tok.tokenize("Icebergs melted near sharp rocks today").terms) {
    TermVector again = tok.tokenize(term);
    REQUIRE(again.size() == 1);
    CHECK(again.terms[0] == term);
  }
}

TEST_CASE("builtin stopword list matches the shipped data file") {
  Stopwords from_file = Stopwords::from_file(data_dir() + "/stopwords_en.txt");
  CHECK(from_file.words() == Stopwords::builtin().words());
}

TEST_CASE("is_redundant") {
  TextRanker ranker = default_ranker();
  // trivia items sharing a term
  Document trivia = doc_from(
      "<m><trivia>Kubrick shot the scene twice</trivia>"
      "<trivia>A rare print signed by Kubrick</trivia></m>");
  CHECK(ranker.is_redundant(unit_of(trivia, {"m", "trivia"})));
  // single occurrence is never redundant
  Document single = doc_from("<m><plot>alpha beta alpha</plot></m>");
  CHECK_FALSE(ranker.is_redundant(unit_of(single, {"m", "plot"})));
  // genres with no shared terms
  Document genres = doc_from("<m><g>Crime</g><g>Thriller</g></m>");
  CHECK_FALSE(ranker.is_redundant(unit_of(genres, {"m", "g"})));
}

TEST_CASE("entity units are matched as whole values") {
  SummaryConfig config;
  config.entity_paths = {"m/actor"};
  TextRanker ranker(config);
  Document doc = doc_from(
      "<m><actor>Kate Winslet</actor><actor>kate winslet</actor><actor>Billy Zane</actor></m>");
  TextUnit unit = unit_of(doc, {"m", "actor"});
  CHECK(ranker.is_entity(unit.tag_unit));
  // repeated whole value (case-folded) counts as redundancy
  CHECK(ranker.is_redundant(unit));
  auto terms = ranker.unit_terms(unit);
  CHECK(terms[0] == TermVector{{"kate winslet"}});

  // without the entity setting the shared term "kate" already links values,
  // but the term split changes similarity
  TextRanker plain = default_ranker();
  CHECK(similarity(plain.unit_terms(unit)[0], plain.unit_terms(unit)[2]) == 0);
}

TEST_CASE("centroid_query picks top-m terms by frequency") {
  TextRanker ranker = default_ranker();
  TextUnit unit = unit_of(abc_doc(), {"r", "t"});
  CentroidQuery q = ranker.centroid_query(unit, 2);
  // freqs: alpha 3, beta 2, gamma 1
  REQUIRE(q.terms.size() == 2);
  CHECK(q.terms[0] == "alpha");
  CHECK(q.terms[1] == "beta");

  // m larger than the distinct term count returns everything
  CentroidQuery all = ranker.centroid_query(unit, 10);
  CHECK(all.terms == std::vector<std::string>{"alpha", "beta", "gamma"});

  // frequency ties break lexicographically
  Document tied = doc_from("<r><t>zeta echo</t><t>zeta echo</t></r>");
  CentroidQuery tq = ranker.centroid_query(unit_of(tied, {"r", "t"}), 1);
  CHECK(tq.terms == std::vector<std::string>{"echo"});

  Document nonred = doc_from("<r><t>alpha</t><t>beta</t></r>");
  CHECK_THROWS_WITH_AS(ranker.centroid_query(unit_of(nonred, {"r", "t"}), 2),
                       "centroid query undefined without redundancy", error);
}

TEST_CASE("relevance follows the tf over containing-count formula") {
  TextRanker ranker = default_ranker();
  TextUnit unit = unit_of(abc_doc(), {"r", "t"});
  auto terms = ranker.unit_terms(unit);
  CentroidQuery q = ranker.centroid_query(unit, 2);  // {alpha, beta}
  // "alpha beta": 1/2 + 1/2 = 1.0
  CHECK(relevance(terms[0], q, terms) == doctest::Approx(1.0).epsilon(1e-12));
  // "beta gamma": 0 + 1/2
  CHECK(relevance(terms[1], q, terms) == doctest::Approx(0.5).epsilon(1e-12));
  // "alpha alpha": 2/2 + 0 = 1.0
  CHECK(relevance(terms[2], q, terms) == doctest::Approx(1.0).epsilon(1e-12));
  // no query terms -> zero
  TermVector none{{"omega"}};
  CHECK(relevance(none, q, terms) == doctest::Approx(0.0));
}

TEST_CASE("similarity is a distinct-term intersection") {
  Tokenizer tok;
  TermVector x = tok.tokenize("alpha beta");
  TermVector y = tok.tokenize("beta gamma");
  CHECK(similarity(x, y) == 1);
  CHECK(similarity(y, x) == 1);
  CHECK(similarity(x, x) == 2);
  CHECK(similarity(x, tok.tokenize("omega")) == 0);
  // duplicates do not inflate the intersection
  CHECK(similarity(tok.tokenize("alpha alpha"), tok.tokenize("alpha")) == 1);
}

TEST_CASE("mmr_rank with beta=1 equals the relevance order") {
  TextRanker ranker = default_ranker();
  TextUnit unit = unit_of(abc_doc(), {"r", "t"});
  TextImportance mmr = ranker.mmr_rank(unit, 1.0, 2);
  // R: 1.0, 0.5, 1.0 -> order 0, 2 (tie by document order), 1
  REQUIRE(mmr.ranked.size() == 3);
  CHECK(mmr.ranked[0].first == 0);
  CHECK(mmr.ranked[1].first == 2);
  CHECK(mmr.ranked[2].first == 1);
  CHECK(mmr.kind == TextKind::redundant);
  std::vector<double> probs;
  for (auto& [i, p] : mmr.ranked) probs.push_back(p);
  CHECK(distribution_ok(probs));
}

TEST_CASE("mmr at beta=0.5 pushes the duplicate below the distinct value") {
  // two identical values and one distinct value sharing the main term
  Document doc = doc_from("<r><t>omega prime</t><t>omega prime</t><t>omega distinct</t></r>");
  TextRanker ranker = default_ranker();
  TextUnit unit = unit_of(doc, {"r", "t"});
  TextImportance mmr = ranker.mmr_rank(unit, 0.5, 2);
  // first pick: occurrence 0 (tie on R, doc order); then the duplicate is
  // penalized by sim=2 while the distinct value only shares "omega"
  CHECK(mmr.ranked[0].first == 0);
  CHECK(mmr.ranked[1].first == 2);
  CHECK(mmr.ranked[2].first == 1);
}

TEST_CASE("mmr shift branch activates only on negative scores") {
  TextRanker ranker = default_ranker();
  // beta=1: all recorded scores are relevances >= 0, plain normalization
  TextUnit unit = unit_of(abc_doc(), {"r", "t"});
  TextImportance plain = ranker.mmr_rank(unit, 1.0, 2);
  // R = {1.0, 0.5, 1.0}: probabilities 0.4, 0.2, 0.4 exactly
  CHECK(plain.probability_of(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(plain.probability_of(1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(plain.probability_of(2) == doctest::Approx(0.4).epsilon(1e-12));

  // beta=0 drives later picks negative; the min+1 shift keeps them positive
  Document doc = doc_from("<r><t>omega prime</t><t>omega prime</t><t>omega solo</t></r>");
  TextImportance shifted = ranker.mmr_rank(unit_of(doc, {"r", "t"}), 0.0, 2);
  std::vector<double> probs;
  for (auto& [i, p] : shifted.ranked) probs.push_back(p);
  CHECK(distribution_ok(probs));
  for (double p : probs) CHECK(p > 0.0);
}

TEST_CASE("mmr order is invariant under permutation of the occurrence list") {
  std::mt19937_64 rng(53);
  TextRanker ranker = default_ranker();
  int exercised = 0;
  for (int trial = 0; trial < 40; ++trial) {
    // flat units over a tiny vocabulary are reliably redundant
    static const char* words[] = {"alpha", "beta", "gamma", "delta"};
    int n = 3 + static_cast<int>(rng() % 4);
    std::string xml = "<r>";
    for (int i = 0; i < n; ++i) {
      xml += "<t>";
      int len = 1 + static_cast<int>(rng() % 3);
      for (int w = 0; w < len; ++w) {
        if (w) xml += ' ';
        xml += words[rng() % 4];
      }
      xml += "</t>";
    }
    xml += "</r>";
    Document doc = doc_from(xml);
    for (auto& [tag, unit] : extract_text_units(doc)) {
      if (!ranker.is_redundant(unit) || unit.size() < 3) continue;
      TextImportance base = ranker.mmr_rank(unit, 0.6, 3);
      TextUnit shuffled = unit;
      std::reverse(shuffled.occurrences.begin(), shuffled.occurrences.end());
      TextImportance again = ranker.mmr_rank(shuffled, 0.6, 3);
      REQUIRE(base.ranked.size() == again.ranked.size());
      for (std::size_t i = 0; i < base.ranked.size(); ++i) {
        int base_node = unit.occurrences[static_cast<std::size_t>(base.ranked[i].first)].node_id;
        int again_node =
            shuffled.occurrences[static_cast<std::size_t>(again.ranked[i].first)].node_id;
        CHECK(base_node == again_node);
        CHECK(base.ranked[i].second == doctest::Approx(again.ranked[i].second).epsilon(1e-12));
      }
      ++exercised;
    }
  }
  CHECK(exercised > 10);
}

TEST_CASE("doc_frequency_distribution counts values document-wide") {
  // "x" appears twice in the document (once under another tag), others once
  Document doc = doc_from("<r><t>x</t><t>y</t><t>z</t><other>x</other></r>");
  TextRanker ranker = default_ranker();
  auto dist = ranker.doc_frequency_distribution(unit_of(doc, {"r", "t"}), doc);
  CHECK(dist[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dist[2] == doctest::Approx(0.25).epsilon(1e-12));

  // all unique -> uniform
  Document uniq = doc_from("<r><t>a</t><t>b</t></r>");
  auto uniform = ranker.doc_frequency_distribution(unit_of(uniq, {"r", "t"}), uniq);
  CHECK(uniform[0] == doctest::Approx(0.5));
  CHECK(uniform[1] == doctest::Approx(0.5));

  // single value -> {1.0}
  Document single = doc_from("<r><t>a</t></r>");
  CHECK(ranker.doc_frequency_distribution(unit_of(single, {"r", "t"}), single)[0] ==
        doctest::Approx(1.0));
}

TEST_CASE("corpus_distribution uses smoothed value counts") {
  TextRanker ranker = default_ranker();
  Document doc = doc_from("<m><g>crime</g><g>thriller</g></m>");
  TextUnit unit = unit_of(doc, {"m", "g"});

  CorpusStats stats;
  stats.num_documents = 10;
  TagUnit g{{"m", "g"}};
  stats.doc_frequency[g] = 10;
  stats.total_tag_count[g] = 10;
  stats.value_count[{g, "crime"}] = 9;
  stats.value_count[{g, "thriller"}] = 1;
  auto dist = ranker.corpus_distribution(unit, stats);
  CHECK(dist[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(dist[1] == doctest::Approx(0.1).epsilon(1e-12));

  // unseen values smooth to 0.5: counts {2, 0.5} -> {0.8, 0.2}
  stats.value_count.erase({g, "thriller"});
  stats.value_count[{g, "crime"}] = 2;
  auto smoothed = ranker.corpus_distribution(unit, stats);
  CHECK(smoothed[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(smoothed[1] == doctest::Approx(0.2).epsilon(1e-12));

  // all unseen -> uniform
  stats.value_count.clear();
  auto uniform = ranker.corpus_distribution(unit, stats);
  CHECK(uniform[0] == doctest::Approx(0.5));
}

TEST_CASE("text_importance degenerate mixtures") {
  Document doc = abc_doc();
  CorpusStats stats = build_stats({doc});
  TextUnit unit = unit_of(doc, {"r", "t"});

  SummaryConfig lambda_one;
  lambda_one.lambda = 1.0;
  lambda_one.mu = 0.0;
  TextRanker r1(lambda_one);
  TextImportance ctx_only = r1.text_importance(unit, doc, stats);
  TextImportance mmr = r1.mmr_rank(unit, lambda_one.beta, lambda_one.centroid_m);
  REQUIRE(ctx_only.ranked.size() == mmr.ranked.size());
  for (std::size_t i = 0; i < mmr.ranked.size(); ++i) {
    CHECK(ctx_only.ranked[i].first == mmr.ranked[i].first);
    CHECK(ctx_only.ranked[i].second == doctest::Approx(mmr.ranked[i].second).epsilon(1e-12));
  }

  SummaryConfig corpus_only;
  corpus_only.lambda = 0.0;
  corpus_only.mu = 0.0;
  TextRanker r2(corpus_only);
  TextImportance corp = r2.text_importance(unit, doc, stats);
  auto expected = r2.corpus_distribution(unit, stats);
  for (const auto& [index, p] : corp.ranked)
    CHECK(p == doctest::Approx(expected[static_cast<std::size_t>(index)]).epsilon(1e-12));
}

TEST_CASE("long text forces the centroid-only path") {
  std::string a = "<t>argon boron carbon dalton echo foxtrot golf hotel india juliet kilo lima "
                  "mike november oscar papa quebec romeo sierra tango uniform victor</t>";
  std::string b = "<t>argon boron carbon dalton echo foxtrot golf hotel india juliet kilo lima "
                  "mike november oscar papa quebec romeo sierra tango whiskey xray yankee</t>";
  Document doc = doc_from("<r>" + a + b + "</r>");
  CorpusStats stats = build_stats({doc});
  TextUnit unit = unit_of(doc, {"r", "t"});

  SummaryConfig config;  // lambda 0.49, mu 0.48
  TextRanker ranker(config);
  REQUIRE(ranker.is_long_text(unit));
  REQUIRE(ranker.is_redundant(unit));
  TextImportance got = ranker.text_importance(unit, doc, stats);
  TextImportance mmr = ranker.mmr_rank(unit, config.beta, config.centroid_m);
  for (std::size_t i = 0; i < mmr.ranked.size(); ++i) {
    CHECK(got.ranked[i].first == mmr.ranked[i].first);
    CHECK(got.ranked[i].second == doctest::Approx(mmr.ranked[i].second).epsilon(1e-12));
  }
}

TEST_CASE("text_importance validates config and inputs") {
  Document doc = abc_doc();
  CorpusStats stats = build_stats({doc});
  SummaryConfig bad;
  bad.lambda = 0.8;
  bad.mu = 0.3;
  CHECK_THROWS_AS(TextRanker{bad}, config_error);

  TextRanker ranker = default_ranker();
  TextUnit empty{TagUnit{{"r", "t"}}, {}};
  CHECK_THROWS_AS(ranker.text_importance(empty, doc, stats), error);
  CHECK_THROWS_AS(ranker.mmr_rank(unit_of(doc, {"r", "t"}), 1.5, 2), config_error);
}

TEST_CASE("every text importance is a distribution over the unit") {
  DocGen gen(59);
  SummaryConfig config;
  TextRanker ranker(config);
  for (int trial = 0; trial < 40; ++trial) {
    auto docs = gen.corpus(3);
    CorpusStats stats = build_stats(docs);
    for (auto& [tag, unit] : extract_text_units(docs[0])) {
      if (unit.empty()) continue;
      TextImportance imp = ranker.text_importance(unit, docs[0], stats);
      REQUIRE(imp.ranked.size() == unit.occurrences.size());
      std::vector<double> probs;
      for (auto& [i, p] : imp.ranked) probs.push_back(p);
      CHECK(distribution_ok(probs));
      // ranked descending with document-order ties
      for (std::size_t i = 1; i < imp.ranked.size(); ++i) {
        CHECK(imp.ranked[i - 1].second >= imp.ranked[i].second);
        if (imp.ranked[i - 1].second == imp.ranked[i].second)
          CHECK(unit.occurrences[static_cast<std::size_t>(imp.ranked[i - 1].first)].node_id <
                unit.occurrences[static_cast<std::size_t>(imp.ranked[i].first)].node_id);
      }
    }
  }
}

TEST_CASE("matches the brute-force oracle on small units") {
  DocGen gen(61);
  SummaryConfig config;  // defaults: lambda .49, mu .48, beta .7, m 5
  TextRanker ranker(config);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto docs = gen.corpus(1 + static_cast<int>(gen.next() % 4), 3, 3);
    CorpusStats stats = build_stats(docs);
    for (auto& [tag, unit] : extract_text_units(docs[0])) {
      if (unit.empty() || unit.size() > 6) continue;
      oracle::UnitView view = oracle::unit_view(docs[0], tag.path, ranker.tokenizer());
      REQUIRE(view.values.size() == unit.occurrences.size());
      auto expected = oracle::text_mixture(view, docs[0], docs, config.lambda, config.mu,
                                           config.beta, config.centroid_m,
                                           config.long_text_threshold);
      TextImportance got = ranker.text_importance(unit, docs[0], stats);
      for (const auto& [index, p] : got.ranked) {
        CHECK(std::abs(p - expected[static_cast<std::size_t>(index)]) <= 1e-9);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}
