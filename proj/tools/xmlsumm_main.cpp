#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "xmlsumm/corpus_stats.hpp"
#include "xmlsumm/doc_model.hpp"
#include "xmlsumm/summarizer.hpp"

namespace fs = std::filesystem;
using namespace xmlsumm;

namespace {

struct Sweep {
  std::vector<int> sizes;
  std::vector<std::string> alphas;  // kept as written, for file names
};

Sweep parse_sweep(const std::string& spec) {
  Sweep sweep;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto semi = spec.find(';', start);
    std::string part = semi == std::string::npos ? spec.substr(start) : spec.substr(start, semi - start);
    auto eq = part.find('=');
    if (eq == std::string::npos) throw config_error("bad --sweep entry '" + part + "'");
    std::string key = part.substr(0, eq);
    std::string values = part.substr(eq + 1);
    std::size_t vstart = 0;
    while (vstart <= values.size()) {
      auto comma = values.find(',', vstart);
      std::string v =
          comma == std::string::npos ? values.substr(vstart) : values.substr(vstart, comma - vstart);
      if (!v.empty()) {
        if (key == "sizes") {
          try {
            sweep.sizes.push_back(std::stoi(v));
          } catch (...) {
            throw config_error("bad sweep size '" + v + "'");
          }
        } else if (key == "alphas") {
          try {
            (void)std::stod(v);
          } catch (...) {
            throw config_error("bad sweep alpha '" + v + "'");
          }
          sweep.alphas.push_back(v);
        } else {
          throw config_error("unknown --sweep key '" + key + "'");
        }
      }
      if (comma == std::string::npos) break;
      vstart = comma + 1;
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (sweep.sizes.empty() || sweep.alphas.empty())
    throw config_error("--sweep needs sizes=... and alphas=...");
  return sweep;
}

std::vector<fs::path> xml_files_in(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw error("not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".xml")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw error("cannot write file: " + tmp.string());
    out << content;
    if (!out.flush()) throw error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_build_stats(const std::string& corpus_dir, const std::string& out_path) {
  std::vector<fs::path> files = xml_files_in(corpus_dir);
  StatsBuilder builder;
  std::size_t tag_units = 0;
  int skipped = 0;
  for (const fs::path& file : files) {
    try {
      Document doc = parse_file(file.string());
      builder.add(doc);
    } catch (const std::exception& e) {
      std::cerr << "warning: skipped " << file.string() << ": " << e.what() << '\n';
      ++skipped;
    }
  }
  CorpusStats stats = std::move(builder).build();  // throws "empty corpus"
  tag_units = stats.doc_frequency.size();

  std::ostringstream buffer;
  save_stats(buffer, stats);
  write_atomically(out_path, buffer.str());

  std::cout << "built stats over " << stats.num_documents << " documents, " << tag_units
            << " tag units";
  if (skipped > 0) std::cout << " (" << skipped << " skipped)";
  std::cout << '\n';
  return 0;
}

int cmd_summarize(const std::string& doc_path, const std::string& stats_path,
                  const SummaryConfig& config, const std::string& out_path) {
  config.validate();
  Document doc = parse_file(doc_path);
  CorpusStats stats = load_stats_file(stats_path);
  Summary summary = summarize(doc, stats, config);
  for (const std::string& line : summary.selection_log) std::cerr << "note: " << line << '\n';
  write_atomically(out_path, to_xml(summary.doc));
  std::cout << "wrote " << out_path << " (" << summary.span_count << " spans)\n";
  return 0;
}

int cmd_batch(const std::string& docs_dir, const std::string& stats_path, const std::string& sweep_spec,
              const SummaryConfig& base_config, const std::string& out_dir) {
  Sweep sweep = parse_sweep(sweep_spec);
  for (const std::string& alpha : sweep.alphas) {
    SummaryConfig probe = base_config;
    probe.alpha = std::stod(alpha);
    probe.size = sweep.sizes.front();
    probe.validate();
  }
  std::vector<fs::path> files = xml_files_in(docs_dir);
  if (files.empty()) throw error("empty corpus");
  CorpusStats stats = load_stats_file(stats_path);
  fs::create_directories(out_dir);

  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex io_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      const fs::path& file = files[i];
      try {
        Document doc = parse_file(file.string());
        for (int size : sweep.sizes) {
          for (const std::string& alpha : sweep.alphas) {
            SummaryConfig config = base_config;
            config.size = size;
            config.alpha = std::stod(alpha);
            Summary summary = summarize(doc, stats, config);
            fs::path out = fs::path(out_dir) / (file.stem().string() + "_" + std::to_string(size) +
                                                "_" + alpha + ".xml");
            write_atomically(out, to_xml(summary.doc));
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << "warning: skipped " << file.string() << ": " << e.what() << '\n';
        failures.fetch_add(1);
      }
    }
  };

  unsigned n_threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::size_t written = (files.size() - static_cast<std::size_t>(failures.load())) *
                        sweep.sizes.size() * sweep.alphas.size();
  std::cout << "wrote " << written << " summaries to " << out_dir;
  if (failures.load() > 0) std::cout << " (" << failures.load() << " documents skipped)";
  std::cout << '\n';
  return failures.load() == static_cast<int>(files.size()) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus-statistics-driven extractive summarization of data-oriented XML"};
  app.require_subcommand(1);

  SummaryConfig config;
  if (const char* env = std::getenv("XMLSUMM_CONFIG")) {
    try {
      apply_config_file(config, env);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  std::string corpus_dir, out_path, doc_path, stats_path, docs_dir, out_dir, sweep_spec;
  std::string entities_csv;

  CLI::App* build = app.add_subcommand("build-stats", "aggregate corpus statistics");
  build->add_option("--corpus", corpus_dir, "directory of .xml files")->required();
  build->add_option("--out", out_path, "stats file to write")->required();

  auto add_config_flags = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", config.alpha, "tag mixture weight in [0,1]");
    cmd->add_option("--beta", config.beta, "MMR weight in [0,1]");
    cmd->add_option("--lambda", config.lambda, "text mixture: tag context weight");
    cmd->add_option("--mu", config.mu, "text mixture: document weight");
    cmd->add_option("--centroid-m", config.centroid_m, "centroid query size");
    cmd->add_option("--entities", entities_csv, "comma-separated entity tag paths");
    cmd->add_option("--seed", config.seed, "seed for tied-sibling choice");
    cmd->add_option("--stopwords", config.stopword_file, "stopword list file");
  };

  CLI::App* summ = app.add_subcommand("summarize", "summarize one document");
  summ->add_option("--doc", doc_path, "document to summarize")->required();
  summ->add_option("--stats", stats_path, "stats file")->required();
  summ->add_option("--size", config.size, "span budget")->required();
  add_config_flags(summ);
  summ->add_option("--out", out_path, "summary file to write")->required();

  CLI::App* batch = app.add_subcommand("batch", "summarize a directory over a parameter sweep");
  batch->add_option("--docs", docs_dir, "directory of .xml files")->required();
  batch->add_option("--stats", stats_path, "stats file")->required();
  batch->add_option("--sweep", sweep_spec, "e.g. sizes=5,10,20;alphas=1.0,0.8,0.6")->required();
  add_config_flags(batch);
  batch->add_option("--out-dir", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (!entities_csv.empty()) {
    config.entity_paths.clear();
    std::size_t start = 0;
    while (start <= entities_csv.size()) {
      auto comma = entities_csv.find(',', start);
      std::string item = comma == std::string::npos ? entities_csv.substr(start)
                                                    : entities_csv.substr(start, comma - start);
      if (!item.empty()) config.entity_paths.push_back(item);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  try {
    if (build->parsed()) return cmd_build_stats(corpus_dir, out_path);
    if (summ->parsed()) return cmd_summarize(doc_path, stats_path, config, out_path);
    if (batch->parsed()) return cmd_batch(docs_dir, stats_path, sweep_spec, config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
