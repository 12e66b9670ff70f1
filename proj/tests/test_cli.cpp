#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace testsupport;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& hint) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("xmlsumm_cli_" + hint + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  fs::path dir = fresh_dir("io");
  fs::path out = dir / "out.txt";
  fs::path err = dir / "err.txt";
  std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + cli_path() + " " + args + " >" +
                    out.string() + " 2>" + err.string();
  int rc = std::system(cmd.c_str());
  CliResult result{WEXITSTATUS(rc), slurp(out), slurp(err)};
  fs::remove_all(dir);
  return result;
}

std::string movies_dir() { return fixture_dir() + "/movies"; }
std::string people_dir() { return fixture_dir() + "/people"; }

fs::path build_fixture_stats(const std::string& corpus_dir, const std::string& hint) {
  fs::path dir = fresh_dir(hint);
  fs::path stats = dir / "stats.tsv";
  CliResult r = run_cli("build-stats --corpus " + corpus_dir + " --out " + stats.string());
  REQUIRE(r.exit_code == 0);
  return stats;
}

}  // namespace

TEST_CASE("build-stats aggregates a corpus directory") {
  fs::path dir = fresh_dir("stats");
  fs::path stats_file = dir / "movies.tsv";
  CliResult r = run_cli("build-stats --corpus " + movies_dir() + " --out " + stats_file.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("6 documents") != std::string::npos);
  CorpusStats stats = load_stats_file(stats_file.string());
  CHECK(stats.num_documents == 6);
  CHECK(stats.doc_frequency.at(TagUnit{{"movie", "title"}}) == 6);
  CHECK(stats.doc_frequency.at(TagUnit{{"movie", "cast", "casting", "role"}}) == 4);
}

TEST_CASE("build-stats rejects an empty or missing corpus") {
  fs::path dir = fresh_dir("empty");
  CliResult r = run_cli("build-stats --corpus " + dir.string() + " --out " +
                        (dir / "s.tsv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error: ") == 0);
  CHECK(r.err.find("empty corpus") != std::string::npos);

  CliResult missing =
      run_cli("build-stats --corpus /nonexistent/dir --out " + (dir / "s.tsv").string());
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("error: ") == 0);
}

TEST_CASE("build-stats warns about malformed files and continues") {
  fs::path dir = fresh_dir("mixed");
  for (const char* name : {"top_gun.xml", "heat.xml", "magnolia.xml"})
    fs::copy_file(fs::path(movies_dir()) / name, dir / name);
  std::ofstream(dir / "broken.xml") << "<movie><title>oops</movie>";
  fs::path stats_file = dir / "s.tsv";
  CliResult r = run_cli("build-stats --corpus " + dir.string() + " --out " + stats_file.string());
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("warning: skipped") != std::string::npos);
  CHECK(r.out.find("3 documents") != std::string::npos);
  CHECK(r.out.find("1 skipped") != std::string::npos);
  CHECK(load_stats_file(stats_file.string()).num_documents == 3);
}

TEST_CASE("summarize writes the requested summary") {
  fs::path stats = build_fixture_stats(movies_dir(), "msumm");
  fs::path out = stats.parent_path() / "summary.xml";
  CliResult r = run_cli("summarize --doc " + movies_dir() + "/last_samurai.xml --stats " +
                        stats.string() + " --size 5 --alpha 1.0 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("5 spans") != std::string::npos);
  std::string xml = slurp(out);
  CHECK(xml.find("<title>Last Samurai, The</title>") != std::string::npos);
  CHECK(xml.find("<prod_year>2003</prod_year>") != std::string::npos);
  CHECK(xml.find("<director>Zwick, Edward</director>") != std::string::npos);
  CHECK(xml.find("<colorinfo>Color</colorinfo>") != std::string::npos);
  CHECK(xml.find("<actor>Cruise, Tom</actor>") != std::string::npos);
  CHECK(xml.find("<role>") == std::string::npos);
}

TEST_CASE("summarize validates flags with greppable errors") {
  fs::path stats = build_fixture_stats(movies_dir(), "mbad");
  fs::path out = stats.parent_path() / "s.xml";
  std::string base = "summarize --doc " + movies_dir() + "/heat.xml --stats " + stats.string() +
                     " --out " + out.string();
  CliResult bad_alpha = run_cli(base + " --size 5 --alpha 1.5");
  CHECK(bad_alpha.exit_code == 2);
  CHECK(bad_alpha.err == "error: alpha must be in [0,1]\n");
  CliResult bad_size = run_cli(base + " --size 0");
  CHECK(bad_size.exit_code == 2);
  CHECK(bad_size.err.find("size must be >= 1") != std::string::npos);
  CliResult no_doc = run_cli("summarize --doc /missing.xml --stats " + stats.string() +
                             " --size 5 --out " + out.string());
  CHECK(no_doc.exit_code == 2);
  CHECK(no_doc.err.find("error: ") == 0);
}

TEST_CASE("uniform-specialty corpus makes alpha 0.8 match alpha 1.0") {
  fs::path stats = build_fixture_stats(people_dir(), "people");
  fs::path dir = stats.parent_path();
  std::string base = "summarize --doc " + people_dir() + "/cruise.xml --stats " + stats.string() +
                     " --size 5 --out ";
  CliResult a = run_cli(base + (dir / "a.xml").string() + " --alpha 1.0");
  CliResult b = run_cli(base + (dir / "b.xml").string() + " --alpha 0.8");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp(dir / "a.xml") == slurp(dir / "b.xml"));
  // the pair co-occurs: movie and role come from the same acted_in element
  std::string xml = slurp(dir / "a.xml");
  CHECK(xml.find("<movie>Top Gun</movie>") != std::string::npos);
  CHECK(xml.find("<role>Maverick</role>") != std::string::npos);
}

TEST_CASE("batch sweeps sizes and alphas into deterministic file names") {
  fs::path stats = build_fixture_stats(movies_dir(), "batch");
  fs::path out_dir = stats.parent_path() / "sweep";
  CliResult r = run_cli("batch --docs " + movies_dir() + " --stats " + stats.string() +
                        " --sweep 'sizes=5,10;alphas=1.0,0.6' --out-dir " + out_dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("24 summaries") != std::string::npos);
  CHECK(fs::exists(out_dir / "heat_5_1.0.xml"));
  CHECK(fs::exists(out_dir / "heat_10_0.6.xml"));
  CHECK(fs::exists(out_dir / "last_samurai_5_1.0.xml"));
  int files = 0;
  for (auto& entry : fs::directory_iterator(out_dir)) {
    ++files;
    (void)entry;
  }
  CHECK(files == 24);

  // the 5-span sweep output equals the direct summarize output
  fs::path direct = stats.parent_path() / "direct.xml";
  run_cli("summarize --doc " + movies_dir() + "/last_samurai.xml --stats " + stats.string() +
          " --size 5 --alpha 1.0 --out " + direct.string());
  CHECK(slurp(direct) == slurp(out_dir / "last_samurai_5_1.0.xml"));

  CliResult bad = run_cli("batch --docs " + movies_dir() + " --stats " + stats.string() +
                          " --sweep 'sizes=five;alphas=1.0' --out-dir " + out_dir.string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("bad sweep size") != std::string::npos);
}

TEST_CASE("XMLSUMM_CONFIG supplies defaults that flags override") {
  fs::path stats = build_fixture_stats(movies_dir(), "cfg");
  fs::path dir = stats.parent_path();
  std::ofstream(dir / "xmlsumm.conf") << "alpha = 0.8\nseed = 0\n";
  std::string env = "XMLSUMM_CONFIG=" + (dir / "xmlsumm.conf").string();
  std::string base = "summarize --doc " + movies_dir() + "/usual_suspects.xml --stats " +
                     stats.string() + " --size 10 --out ";

  CliResult from_config = run_cli(base + (dir / "c.xml").string(), env);
  CliResult from_flag = run_cli(base + (dir / "f.xml").string() + " --alpha 0.8");
  REQUIRE(from_config.exit_code == 0);
  REQUIRE(from_flag.exit_code == 0);
  CHECK(slurp(dir / "c.xml") == slurp(dir / "f.xml"));

  // a flag wins over the config file
  CliResult override_flag = run_cli(base + (dir / "o.xml").string() + " --alpha 1.0", env);
  CliResult plain = run_cli(base + (dir / "p.xml").string() + " --alpha 1.0");
  REQUIRE(override_flag.exit_code == 0);
  CHECK(slurp(dir / "o.xml") == slurp(dir / "p.xml"));

  std::ofstream(dir / "bad.conf") << "alpha = 2.0\n";
  CliResult bad = run_cli(base + (dir / "x.xml").string(),
                          "XMLSUMM_CONFIG=" + (dir / "bad.conf").string());
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("alpha must be in [0,1]") != std::string::npos);
}
