#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clplan/errors.hpp"
#include "clplan/format.hpp"
#include "clplan/topology.hpp"

namespace clplan {

namespace detail {

struct Token {
  std::string text;
  int line = 0;
};

inline std::vector<Token> tokenize_native(const std::string& text) {
  std::vector<Token> tokens;
  int line = 1;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back({cur, line});
      cur.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') {
      flush();
      ++line;
      continue;
    }
    if (ch == '#' || ch == '?') {
      // comment / directive: skip to end of line
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      --i;
      continue;
    }
    if (ch == '(' || ch == ')') {
      flush();
      tokens.push_back({std::string(1, ch), line});
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
      continue;
    }
    cur.push_back(ch);
  }
  flush();
  return tokens;
}

inline bool is_number(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

inline int line_of_offset(const std::string& text, std::size_t pos) {
  int line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Minimal element extraction for the regular SNDlib XML schema. Finds the
// body of <tag ...>body</tag> starting at `from`; returns the body and the
// position just past the closing tag.
inline std::optional<std::pair<std::string, std::size_t>> xml_element(const std::string& text,
                                                                      const std::string& tag,
                                                                      std::size_t from) {
  const std::string open = "<" + tag;
  std::size_t pos = from;
  while (true) {
    pos = text.find(open, pos);
    if (pos == std::string::npos) return std::nullopt;
    const char next = pos + open.size() < text.size() ? text[pos + open.size()] : '\0';
    if (next == '>' || next == ' ' || next == '\t' || next == '\n' || next == '\r') break;
    pos += open.size();
  }
  const std::size_t body_start = text.find('>', pos);
  if (body_start == std::string::npos) {
    throw ParseError("unterminated <" + tag + "> near line " +
                     std::to_string(line_of_offset(text, pos)));
  }
  const std::string close = "</" + tag + ">";
  const std::size_t body_end = text.find(close, body_start + 1);
  if (body_end == std::string::npos) {
    throw ParseError("missing " + close + " for element starting at line " +
                     std::to_string(line_of_offset(text, pos)));
  }
  return std::make_pair(text.substr(body_start + 1, body_end - body_start - 1),
                        body_end + close.size());
}

inline std::optional<std::string> xml_attribute(const std::string& text, std::size_t elem_pos,
                                                const std::string& attr) {
  const std::size_t end = text.find('>', elem_pos);
  if (end == std::string::npos) return std::nullopt;
  const std::string needle = attr + "=\"";
  const std::size_t p = text.find(needle, elem_pos);
  if (p == std::string::npos || p > end) return std::nullopt;
  const std::size_t q = text.find('"', p + needle.size());
  if (q == std::string::npos) return std::nullopt;
  return text.substr(p + needle.size(), q - p - needle.size());
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

struct RawLink {
  std::string a;
  std::string b;
  std::optional<double> length_km;
  int line = 0;
};

namespace detail {

inline Topology assemble_topology(std::vector<Node> nodes, std::vector<RawLink> raw_links,
                                  const SpanParams& span_params) {
  std::map<std::string, const Node*> by_name;
  for (const auto& n : nodes) by_name[n.name] = &n;

  std::vector<std::array<std::string, 2>> ends;
  std::vector<double> lengths;
  for (const auto& rl : raw_links) {
    auto ia = by_name.find(rl.a);
    auto ib = by_name.find(rl.b);
    if (ia == by_name.end() || ib == by_name.end()) {
      throw ParseError("link at line " + std::to_string(rl.line) + " references unknown node '" +
                       (ia == by_name.end() ? rl.a : rl.b) + "'");
    }
    double len;
    if (rl.length_km) {
      len = *rl.length_km;
    } else {
      len = great_circle_km(ia->second->lon, ia->second->lat, ib->second->lon, ib->second->lat);
    }
    if (!(len > 0.0)) {
      throw ValidationError("link '" + rl.a + "'-'" + rl.b + "' at line " +
                            std::to_string(rl.line) +
                            " has no usable length (no coordinates and no explicit length)");
    }
    ends.push_back({rl.a, rl.b});
    lengths.push_back(len);
  }
  return Topology(std::move(nodes), std::move(ends), std::move(lengths), span_params);
}

inline Topology parse_native(const std::string& text, const SpanParams& span_params) {
  auto tokens = tokenize_native(text);
  std::size_t i = 0;
  auto expect = [&](const std::string& what) -> const Token& {
    if (i >= tokens.size()) throw ParseError("unexpected end of file, expected " + what);
    return tokens[i];
  };

  std::vector<Node> nodes;
  std::vector<RawLink> raw_links;
  bool saw_nodes = false;
  bool saw_links = false;

  while (i < tokens.size()) {
    const Token section = tokens[i++];
    if (section.text == "(" || section.text == ")") {
      throw ParseError("unexpected '" + section.text + "' at line " +
                       std::to_string(section.line));
    }
    if (expect("'(' after section " + section.text).text != "(") {
      throw ParseError("expected '(' after section '" + section.text + "' at line " +
                       std::to_string(section.line));
    }
    ++i;
    if (section.text == "NODES") {
      saw_nodes = true;
      while (expect("node entry or ')'").text != ")") {
        Node n;
        n.name = tokens[i].text;
        const int line = tokens[i].line;
        ++i;
        if (expect("'(' in node entry").text != "(") {
          throw ParseError("node '" + n.name + "' at line " + std::to_string(line) +
                           ": expected '( x y )'");
        }
        ++i;
        std::vector<double> coords;
        while (expect("coordinate or ')'").text != ")") {
          double v;
          if (!is_number(tokens[i].text, v)) {
            throw ParseError("node '" + n.name + "' at line " + std::to_string(tokens[i].line) +
                             ": bad coordinate '" + tokens[i].text + "'");
          }
          coords.push_back(v);
          ++i;
        }
        ++i;  // ')'
        if (coords.size() >= 2) {
          n.lon = coords[0];
          n.lat = coords[1];
        }
        nodes.push_back(std::move(n));
      }
      ++i;  // ')'
    } else if (section.text == "LINKS") {
      saw_links = true;
      while (expect("link entry or ')'").text != ")") {
        RawLink rl;
        rl.line = tokens[i].line;
        ++i;  // link id, unused
        if (expect("'(' in link entry").text != "(") {
          throw ParseError("link at line " + std::to_string(rl.line) + ": expected '( a b )'");
        }
        ++i;
        rl.a = expect("link endpoint").text;
        ++i;
        rl.b = expect("link endpoint").text;
        ++i;
        if (expect("')' after endpoints").text != ")") {
          throw ParseError("link at line " + std::to_string(rl.line) +
                           ": expected exactly two endpoints");
        }
        ++i;
        // Trailing scalars: standard SNDlib carries capacity/cost fields which
        // we ignore. If exactly one scalar is present it is taken as an
        // explicit length in km.
        std::vector<double> scalars;
        while (i < tokens.size() && tokens[i].text != "(" && tokens[i].text != ")") {
          double v;
          if (!is_number(tokens[i].text, v)) break;
          scalars.push_back(v);
          ++i;
        }
        if (i < tokens.size() && tokens[i].text == "(") {
          // capacity module list: skip balanced group
          int depth = 0;
          do {
            if (tokens[i].text == "(") ++depth;
            if (tokens[i].text == ")") --depth;
            ++i;
          } while (i < tokens.size() && depth > 0);
        }
        if (scalars.size() == 1) rl.length_km = scalars[0];
        raw_links.push_back(std::move(rl));
      }
      ++i;  // ')'
    } else {
      // Unknown section (DEMANDS, ADMISSIBLE_PATHS, ...): skip balanced group.
      int depth = 1;
      while (i < tokens.size() && depth > 0) {
        if (tokens[i].text == "(") ++depth;
        if (tokens[i].text == ")") --depth;
        ++i;
      }
      if (depth != 0) {
        throw ParseError("unbalanced parentheses in section '" + section.text +
                         "' starting at line " + std::to_string(section.line));
      }
    }
  }
  if (!saw_nodes || !saw_links) {
    throw ParseError("document is missing a NODES or LINKS section");
  }
  return assemble_topology(std::move(nodes), std::move(raw_links), span_params);
}

inline Topology parse_xml(const std::string& text, const SpanParams& span_params) {
  std::vector<Node> nodes;
  std::vector<RawLink> raw_links;

  auto nodes_block = xml_element(text, "nodes", 0);
  auto links_block = xml_element(text, "links", 0);
  if (!nodes_block || !links_block) {
    throw ParseError("XML document is missing a <nodes> or <links> element");
  }

  const std::string& nb = nodes_block->first;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = nb.find("<node", pos);
    if (open == std::string::npos) break;
    auto elem = xml_element(nb, "node", open);
    if (!elem) break;
    auto id = xml_attribute(nb, open, "id");
    if (!id) {
      throw ParseError("<node> without id attribute near line " +
                       std::to_string(line_of_offset(text, open)));
    }
    Node n;
    n.name = *id;
    if (auto x = xml_element(elem->first, "x", 0)) n.lon = std::stod(trim(x->first));
    if (auto y = xml_element(elem->first, "y", 0)) n.lat = std::stod(trim(y->first));
    nodes.push_back(std::move(n));
    pos = open + elem->second;
  }

  const std::string& lb = links_block->first;
  pos = 0;
  while (true) {
    const std::size_t open = lb.find("<link", pos);
    if (open == std::string::npos) break;
    auto elem = xml_element(lb, "link", open);
    if (!elem) break;
    RawLink rl;
    rl.line = line_of_offset(text, open);
    auto src = xml_element(elem->first, "source", 0);
    auto dst = xml_element(elem->first, "target", 0);
    if (!src || !dst) {
      throw ParseError("<link> without <source>/<target> near line " + std::to_string(rl.line));
    }
    rl.a = trim(src->first);
    rl.b = trim(dst->first);
    if (auto len = xml_element(elem->first, "length", 0)) {
      rl.length_km = std::stod(trim(len->first));
    }
    raw_links.push_back(std::move(rl));
    pos = open + elem->second;
  }

  return assemble_topology(std::move(nodes), std::move(raw_links), span_params);
}

}  // namespace detail

// Parses an SNDlib topology, either native plain-text sections or XML.
// Link lengths come from an explicit per-link value when present, otherwise
// from the great-circle distance between node coordinates (0.1 km rounding).
inline Topology parse_topology(const std::string& text, const SpanParams& span_params = {}) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '<') return detail::parse_xml(text, span_params);
  return detail::parse_native(text, span_params);
}

// Canonical plain-text listing used by golden tests and the dump-topology
// subcommand.
inline std::string dump_topology(const Topology& topo) {
  std::ostringstream out;
  out << "nodes " << topo.node_count() << "\n";
  for (const auto& n : topo.nodes()) {
    out << n.name << " " << format_sig(n.lon) << " " << format_sig(n.lat) << "\n";
  }
  out << "links " << topo.link_count() << "\n";
  for (const auto& lk : topo.links()) {
    out << topo.node(lk.a).name << " " << topo.node(lk.b).name << " " << format_km(lk.length_km)
        << " " << lk.spans.size() << "\n";
  }
  return out.str();
}

}  // namespace clplan
