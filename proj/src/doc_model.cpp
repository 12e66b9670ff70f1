#include "xmlsumm/doc_model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace xmlsumm {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

bool is_name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return is_name_start(c) || std::isdigit(c) || c == '-' || c == '.';
}

// "x:genre" -> "genre"
std::string_view strip_prefix(std::string_view name) {
  auto pos = name.rfind(':');
  return pos == std::string_view::npos ? name : name.substr(pos + 1);
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

constexpr int kMaxDepth = 10000;

class Parser {
 public:
  Parser(std::string_view input, std::string source_id)
      : in_(input), doc_{std::move(source_id), {}} {}

  Document run() {
    if (in_.empty()) throw parse_error("empty input", 0);
    skip_bom();
    skip_misc();
    if (eof()) throw parse_error("no root element", pos_);
    if (peek() != '<') throw parse_error("expected '<'", pos_);
    parse_element(-1, 0);
    skip_misc();
    if (!eof()) throw parse_error("content after root element", pos_);
    return std::move(doc_);
  }

 private:
  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void expect(char c) {
    if (eof() || peek() != c)
      throw parse_error(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_bom() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  void skip_ws() {
    while (!eof() && is_space(peek())) ++pos_;
  }

  // Whitespace, comments, PIs and a DOCTYPE outside the root element.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<?")) {
        skip_pi();
      } else if (starts_with("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  void skip_comment() {
    std::size_t start = pos_;
    pos_ += 4;
    auto end = in_.find("-->", pos_);
    if (end == std::string_view::npos) throw parse_error("unterminated comment", start);
    pos_ = end + 3;
  }

  void skip_pi() {
    std::size_t start = pos_;
    pos_ += 2;
    auto end = in_.find("?>", pos_);
    if (end == std::string_view::npos)
      throw parse_error("unterminated processing instruction", start);
    pos_ = end + 2;
  }

  void skip_doctype() {
    std::size_t start = pos_;
    pos_ += 9;
    int brackets = 0;
    while (!eof()) {
      char c = peek();
      ++pos_;
      if (c == '[') ++brackets;
      else if (c == ']') --brackets;
      else if (c == '>' && brackets == 0) return;
    }
    throw parse_error("unterminated DOCTYPE", start);
  }

  std::string parse_name() {
    if (eof() || !is_name_start(static_cast<unsigned char>(peek())))
      throw parse_error("expected a name", pos_);
    std::size_t start = pos_;
    while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) ++pos_;
    return std::string(in_.substr(start, pos_ - start));
  }

  // Resolves "&...;" starting at pos_ (which points at '&').
  void parse_reference(std::string& out) {
    std::size_t start = pos_;
    ++pos_;
    auto semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 8)
      throw parse_error("unterminated entity reference", start);
    std::string_view name = in_.substr(pos_, semi - pos_);
    pos_ = semi + 1;
    if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "amp") out.push_back('&');
    else if (name == "apos") out.push_back('\'');
    else if (name == "quot") out.push_back('"');
    else if (!name.empty() && name[0] == '#') {
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      std::string digits(name.substr(hex ? 2 : 1));
      if (digits.empty()) throw parse_error("bad character reference", start);
      char* endp = nullptr;
      unsigned long cp = std::strtoul(digits.c_str(), &endp, hex ? 16 : 10);
      if (*endp != '\0' || cp == 0 || cp > 0x10FFFF)
        throw parse_error("bad character reference", start);
      append_utf8(out, cp);
    } else {
      throw parse_error("unknown entity '&" + std::string(name) + ";'", start);
    }
  }

  std::string parse_attr_value() {
    if (eof() || (peek() != '"' && peek() != '\''))
      throw parse_error("expected quoted attribute value", pos_);
    char quote = peek();
    ++pos_;
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '&') parse_reference(value);
      else if (peek() == '<') throw parse_error("'<' in attribute value", pos_);
      else value.push_back(in_[pos_++]);
    }
    expect(quote);
    return value;
  }

  int new_node(std::string label, int parent) {
    int id = static_cast<int>(doc_.nodes.size());
    doc_.nodes.push_back(Node{std::move(label), {}, parent, {}});
    if (parent >= 0) doc_.nodes[parent].children.push_back(id);
    return id;
  }

  // Parses one element starting at '<'. Creates the node, its attribute
  // children, then its content.
  void parse_element(int parent, int depth) {
    if (depth > kMaxDepth) throw parse_error("document nested too deeply", pos_);
    std::size_t tag_start = pos_;
    expect('<');
    std::string name = parse_name();
    int id = new_node(std::string(strip_prefix(name)), parent);

    // attributes
    std::vector<std::string> seen_attrs;
    for (;;) {
      skip_ws();
      if (eof()) throw parse_error("unterminated start tag", tag_start);
      if (peek() == '>' || peek() == '/') break;
      std::size_t attr_start = pos_;
      std::string attr = parse_name();
      skip_ws();
      expect('=');
      skip_ws();
      std::string value = parse_attr_value();
      if (std::find(seen_attrs.begin(), seen_attrs.end(), attr) != seen_attrs.end())
        throw parse_error("duplicate attribute '" + attr + "'", attr_start);
      seen_attrs.push_back(attr);
      if (attr == "xmlns" || attr.rfind("xmlns:", 0) == 0) continue;
      int attr_id = new_node("@" + std::string(strip_prefix(attr)), id);
      doc_.nodes[attr_id].text = trim(value);
    }

    if (peek() == '/') {
      ++pos_;
      expect('>');
      return;
    }
    expect('>');

    // content: text runs, child elements, comments, PIs, CDATA
    std::string text;
    bool saw_text_run = false;  // a run is pending in `text`
    auto flush_text = [&] {
      if (!saw_text_run) return;
      std::string t = trim(text);
      text.clear();
      saw_text_run = false;
      if (t.empty()) return;
      int tid = new_node("#text", id);
      doc_.nodes[tid].text = std::move(t);
    };

    for (;;) {
      if (eof()) throw parse_error("missing end tag for <" + name + ">", tag_start);
      if (peek() == '<') {
        if (starts_with("</")) {
          break;
        } else if (starts_with("<!--")) {
          skip_comment();
        } else if (starts_with("<![CDATA[")) {
          std::size_t start = pos_;
          pos_ += 9;
          auto end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) throw parse_error("unterminated CDATA", start);
          text.append(in_.substr(pos_, end - pos_));
          saw_text_run = true;
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          skip_pi();
        } else if (starts_with("<!")) {
          throw parse_error("unexpected markup", pos_);
        } else {
          flush_text();
          parse_element(id, depth + 1);
        }
      } else if (peek() == '&') {
        parse_reference(text);
        saw_text_run = true;
      } else {
        text.push_back(in_[pos_++]);
        saw_text_run = true;
      }
    }

    // end tag
    pos_ += 2;
    std::string end_name = parse_name();
    if (end_name != name)
      throw parse_error("mismatched end tag </" + end_name + ">, expected </" + name + ">",
                        pos_ - end_name.size());
    skip_ws();
    expect('>');

    Node& node = doc_.nodes[id];
    if (node.children.empty()) {
      // pure-text (or empty) leaf: whole trimmed content becomes the text
      node.text = trim(text);
    } else {
      flush_text();
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  Document doc_;
};

void escape_text(std::ostream& os, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': os << "&amp;"; break;
      case '<': os << "&lt;"; break;
      case '>': os << "&gt;"; break;
      default: os << c;
    }
  }
}

void escape_attr(std::ostream& os, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': os << "&amp;"; break;
      case '<': os << "&lt;"; break;
      case '"': os << "&quot;"; break;
      default: os << c;
    }
  }
}

void write_node(std::ostream& os, const Document& doc, int id, int indent) {
  const Node& n = doc.node(id);
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');

  if (n.label == "#text") {
    os << pad;
    escape_text(os, n.text);
    os << '\n';
    return;
  }

  os << pad << '<' << n.label;
  std::size_t i = 0;
  for (; i < n.children.size(); ++i) {
    const Node& c = doc.node(n.children[i]);
    if (c.label.size() < 2 || c.label[0] != '@') break;
    os << ' ' << c.label.substr(1) << "=\"";
    escape_attr(os, c.text);
    os << '"';
  }

  bool has_content = i < n.children.size() || n.has_text();
  if (!has_content) {
    os << "/>\n";
    return;
  }
  if (i >= n.children.size()) {
    os << '>';
    escape_text(os, n.text);
    os << "</" << n.label << ">\n";
    return;
  }
  os << ">\n";
  for (; i < n.children.size(); ++i) write_node(os, doc, n.children[i], indent + 1);
  os << pad << "</" << n.label << ">\n";
}

}  // namespace

std::vector<std::string> Document::path_of(int id) const {
  std::vector<std::string> labels;
  for (int cur = id; cur >= 0; cur = node(cur).parent) labels.push_back(node(cur).label);
  std::reverse(labels.begin(), labels.end());
  return labels;
}

std::string TagUnit::joined() const {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back('/');
    out += path[i];
  }
  return out;
}

TagUnit TagUnit::from_joined(std::string_view joined) {
  TagUnit unit;
  std::size_t start = 0;
  while (start <= joined.size()) {
    auto slash = joined.find('/', start);
    if (slash == std::string_view::npos) {
      unit.path.emplace_back(joined.substr(start));
      break;
    }
    unit.path.emplace_back(joined.substr(start, slash - start));
    start = slash + 1;
  }
  return unit;
}

Document parse_document(std::string_view xml, std::string source_id) {
  return Parser(xml, std::move(source_id)).run();
}

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

std::vector<TagUnit> extract_tag_units(const Document& doc) {
  std::vector<TagUnit> units;
  std::map<TagUnit, bool> seen;
  for (int id = 0; id < doc.node_count(); ++id) {
    if (!doc.node(id).is_leaf()) continue;
    TagUnit unit{doc.path_of(id)};
    if (!seen.emplace(unit, true).second) continue;
    units.push_back(std::move(unit));
  }
  return units;
}

std::map<TagUnit, TextUnit> extract_text_units(const Document& doc) {
  std::map<TagUnit, TextUnit> units;
  for (int id = 0; id < doc.node_count(); ++id) {
    const Node& n = doc.node(id);
    if (!n.is_leaf()) continue;
    TagUnit unit{doc.path_of(id)};
    auto [it, inserted] = units.try_emplace(unit, TextUnit{unit, {}});
    if (n.has_text()) it->second.occurrences.push_back({n.text, id, n.parent});
  }
  return units;
}

std::string to_xml(const Document& doc) {
  std::ostringstream os;
  write_xml(os, doc);
  return os.str();
}

void write_xml(std::ostream& os, const Document& doc) {
  if (doc.nodes.empty()) return;
  write_node(os, doc, 0, 0);
}

}  // namespace xmlsumm
