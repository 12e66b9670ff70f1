#include "xmlsumm/corpus_stats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace xmlsumm {

namespace {

std::string percent_encode(std::string_view s, bool encode_slash) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (c == '%' || c == '\t' || c == '\n' || (encode_slash && c == '/')) {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s, int line_no) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size()) throw stats_error("line " + std::to_string(line_no) + ": truncated percent escape");
    int hi = hex_digit(s[i + 1]), lo = hex_digit(s[i + 2]);
    if (hi < 0 || lo < 0) throw stats_error("line " + std::to_string(line_no) + ": bad percent escape");
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

std::string encode_path(const TagUnit& unit) {
  std::string out;
  for (std::size_t i = 0; i < unit.path.size(); ++i) {
    if (i) out.push_back('/');
    out += percent_encode(unit.path[i], /*encode_slash=*/true);
  }
  return out;
}

TagUnit decode_path(std::string_view encoded, int line_no) {
  TagUnit unit;
  std::size_t start = 0;
  while (start <= encoded.size()) {
    auto slash = encoded.find('/', start);
    std::string_view segment =
        slash == std::string_view::npos ? encoded.substr(start) : encoded.substr(start, slash - start);
    unit.path.push_back(percent_decode(segment, line_no));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  if (unit.path.empty() || unit.path.front().empty())
    throw stats_error("line " + std::to_string(line_no) + ": empty tag path");
  return unit;
}

std::int64_t parse_count(std::string_view field, int line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw stats_error("line " + std::to_string(line_no) + ": bad count '" + std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::string normalize_value(std::string_view value) {
  std::size_t b = 0, e = value.size();
  auto ws = [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (b < e && ws(static_cast<unsigned char>(value[b]))) ++b;
  while (e > b && ws(static_cast<unsigned char>(value[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i)
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(value[i]))));
  return out;
}

double CorpusStats::doc_frequency_of(const TagUnit& unit) const {
  auto it = doc_frequency.find(unit);
  return it == doc_frequency.end() ? kUnseenSmoothing : static_cast<double>(it->second);
}

double CorpusStats::total_count_of(const TagUnit& unit) const {
  auto it = total_tag_count.find(unit);
  return it == total_tag_count.end() ? kUnseenSmoothing : static_cast<double>(it->second);
}

double CorpusStats::value_count_of(const TagUnit& unit, std::string_view normalized_value) const {
  auto it = value_count.find({unit, std::string(normalized_value)});
  return it == value_count.end() ? kUnseenSmoothing : static_cast<double>(it->second);
}

void StatsBuilder::add(const Document& doc) {
  ++stats_.num_documents;
  std::set<TagUnit> present;
  for (int id = 0; id < doc.node_count(); ++id) {
    const Node& n = doc.node(id);
    if (!n.is_leaf()) continue;
    TagUnit unit{doc.path_of(id)};
    ++stats_.total_tag_count[unit];
    if (n.has_text()) ++stats_.value_count[{unit, normalize_value(n.text)}];
    present.insert(std::move(unit));
  }
  for (const TagUnit& unit : present) ++stats_.doc_frequency[unit];
}

CorpusStats StatsBuilder::build() && {
  if (stats_.num_documents == 0) throw stats_error("empty corpus");
  return std::move(stats_);
}

CorpusStats build_stats(const std::vector<Document>& docs) {
  StatsBuilder builder;
  for (const Document& doc : docs) builder.add(doc);
  return std::move(builder).build();
}

CorpusStats merge_stats(const CorpusStats& a, const CorpusStats& b) {
  CorpusStats out = a;
  out.num_documents += b.num_documents;
  for (const auto& [unit, n] : b.doc_frequency) out.doc_frequency[unit] += n;
  for (const auto& [unit, n] : b.total_tag_count) out.total_tag_count[unit] += n;
  for (const auto& [key, n] : b.value_count) out.value_count[key] += n;
  return out;
}

double average_count(const CorpusStats& stats, const TagUnit& unit) {
  auto it = stats.total_tag_count.find(unit);
  if (it == stats.total_tag_count.end()) throw stats_error("unknown tag unit: " + unit.joined());
  return static_cast<double>(it->second) / static_cast<double>(stats.num_documents);
}

void save_stats(std::ostream& os, const CorpusStats& stats) {
  os << "xmlsumm-stats\t" << stats.format_version << '\n';
  os << "num_documents\t" << stats.num_documents << '\n';
  // std::map keys are already sorted; encoded lines preserve that order
  // except when encoding reorders corner-case labels, so sort the lines.
  std::vector<std::string> lines;
  lines.reserve(stats.doc_frequency.size());
  for (const auto& [unit, df] : stats.doc_frequency) {
    std::ostringstream line;
    line << "T\t" << encode_path(unit) << '\t' << df << '\t' << stats.total_tag_count.at(unit);
    lines.push_back(line.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) os << line << '\n';

  lines.clear();
  lines.reserve(stats.value_count.size());
  for (const auto& [key, count] : stats.value_count) {
    std::ostringstream line;
    line << "V\t" << encode_path(key.first) << '\t' << percent_encode(key.second, false) << '\t'
         << count;
    lines.push_back(line.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) os << line << '\n';
}

void save_stats_file(const std::string& path, const CorpusStats& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write file: " + path);
  save_stats(out, stats);
  if (!out.flush()) throw error("write failed: " + path);
}

CorpusStats load_stats(std::istream& is) {
  CorpusStats stats;
  std::string line;
  int line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++line_no;
    return true;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw stats_error("line " + std::to_string(line_no) + ": " + msg);
  };

  if (!next_line()) throw stats_error("line 1: missing header");
  {
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0] != "xmlsumm-stats") fail("missing 'xmlsumm-stats' header");
    std::int64_t version = parse_count(fields[1], line_no);
    if (version != kStatsFormatVersion)
      fail("format version " + std::to_string(version) + " not supported (expected " +
           std::to_string(kStatsFormatVersion) + ")");
    stats.format_version = static_cast<int>(version);
  }

  if (!next_line()) throw stats_error("line 2: missing num_documents");
  {
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0] != "num_documents") fail("expected num_documents");
    stats.num_documents = parse_count(fields[1], line_no);
    if (stats.num_documents < 1) fail("num_documents must be >= 1");
  }

  while (next_line()) {
    if (line.empty()) fail("empty line");
    auto fields = split_tabs(line);
    if (fields[0] == "T") {
      if (fields.size() != 4) fail("T record needs 4 fields");
      TagUnit unit = decode_path(fields[1], line_no);
      std::int64_t df = parse_count(fields[2], line_no);
      std::int64_t total = parse_count(fields[3], line_no);
      if (df < 1 || df > stats.num_documents) fail("doc_frequency out of range");
      if (total < df) fail("total_tag_count below doc_frequency");
      if (!stats.doc_frequency.emplace(unit, df).second) fail("duplicate tag unit");
      stats.total_tag_count.emplace(std::move(unit), total);
    } else if (fields[0] == "V") {
      if (fields.size() != 4) fail("V record needs 4 fields");
      TagUnit unit = decode_path(fields[1], line_no);
      std::string value = percent_decode(fields[2], line_no);
      std::int64_t count = parse_count(fields[3], line_no);
      if (count < 1) fail("value count must be >= 1");
      if (!stats.doc_frequency.count(unit)) fail("value record for unknown tag unit");
      if (!stats.value_count.emplace(std::make_pair(std::move(unit), std::move(value)), count).second)
        fail("duplicate value record");
    } else {
      fail("unknown record type '" + std::string(fields[0]) + "'");
    }
  }

  return stats;
}

CorpusStats load_stats_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file: " + path);
  return load_stats(in);
}

}  // namespace xmlsumm
