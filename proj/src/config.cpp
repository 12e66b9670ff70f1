#include "xmlsumm/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace xmlsumm {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double d = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty())
    throw config_error(key + " must be a number, got '" + value + "'");
  return d;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t n = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw config_error(key + " must be an integer, got '" + value + "'");
  return n;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto comma = value.find(',', start);
    std::string item =
        trim(comma == std::string::npos ? value.substr(start) : value.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void SummaryConfig::validate() const {
  if (size < 1) throw config_error("size must be >= 1");
  if (alpha < 0.0 || alpha > 1.0) throw config_error("alpha must be in [0,1]");
  if (beta < 0.0 || beta > 1.0) throw config_error("beta must be in [0,1]");
  if (lambda < 0.0 || mu < 0.0 || lambda + mu > 1.0)
    throw config_error("lambda and mu must be >= 0 with lambda + mu <= 1");
  if (centroid_m < 1) throw config_error("centroid-m must be >= 1");
  if (long_text_threshold < 1) throw config_error("long-text-threshold must be >= 1");
}

void apply_config_file(SummaryConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    // accept both flag spelling (centroid-m) and underscores (centroid_m)
    for (char& c : key)
      if (c == '_') c = '-';

    if (key == "size") config.size = static_cast<int>(parse_int(key, value));
    else if (key == "alpha") config.alpha = parse_double(key, value);
    else if (key == "beta") config.beta = parse_double(key, value);
    else if (key == "lambda") config.lambda = parse_double(key, value);
    else if (key == "mu") config.mu = parse_double(key, value);
    else if (key == "centroid-m") config.centroid_m = static_cast<int>(parse_int(key, value));
    else if (key == "entities") config.entity_paths = split_commas(value);
    else if (key == "long-text-threshold")
      config.long_text_threshold = static_cast<int>(parse_int(key, value));
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "stopwords") config.stopword_file = value;
    else throw config_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
}

}  // namespace xmlsumm
