#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dtbench/core.hpp"

namespace dtbench {

// ---------------------------------------------------------------------------
// Tree text format
//
//   tree   ::= node | leaf
//   leaf   ::= '(' 'leaf' class-name ')'
//   node   ::= '(' feature-name branch+ ')'
//   branch ::= '(' value-name tree ')'
//
// Whitespace-insensitive. '#' starts a comment running to end of line; a
// leading `#space <path>` line names the feature-space file.
// ---------------------------------------------------------------------------

namespace detail {

inline void serialize_node(const DecisionTree& tree, NodeId n, std::size_t indent, std::string& out) {
  const FeatureSpace& space = tree.space();
  if (tree.is_leaf(n)) {
    out += "(leaf ";
    out += space.class_name(tree.class_of(n));
    out += ')';
    return;
  }
  const FeatureId f = tree.feature(n);
  out += '(';
  out += space.feature_name(f);
  const auto kids = tree.children(n);
  for (ValueId v = 0; v < kids.size(); ++v) {
    out += '\n';
    out.append(indent + 2, ' ');
    out += '(';
    out += space.value_name(f, v);
    out += ' ';
    serialize_node(tree, kids[v], indent + 2, out);
    out += ')';
  }
  out += ')';
}

class TreeLexer {
 public:
  struct Token {
    enum Kind { kOpen, kClose, kAtom, kEnd } kind;
    std::string text;
    std::size_t line;
    std::size_t column;
  };

  explicit TreeLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    const std::size_t line = line_, column = column_;
    if (pos_ >= text_.size()) return {Token::kEnd, "", line, column};
    const char ch = text_[pos_];
    if (ch == '(' || ch == ')') {
      advance();
      return {ch == '(' ? Token::kOpen : Token::kClose, std::string(1, ch), line, column};
    }
    std::string atom;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '#') break;
      atom += c;
      advance();
    }
    return {Token::kAtom, std::move(atom), line, column};
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class TreeParser {
 public:
  TreeParser(std::string_view text, SpacePtr space)
      : lexer_(text), builder_(space), space_(*space), on_path_(space_.num_features(), 0) {}

  DecisionTree parse() {
    advance();
    const auto root = parse_tree();
    if (tok_.kind != TreeLexer::Token::kEnd) fail("trailing input after tree");
    return builder_.build(root);
  }

 private:
  using Token = TreeLexer::Token;

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(tok_.line, tok_.column, reason); }

  void advance() { tok_ = lexer_.next(); }

  void expect(Token::Kind kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  std::string take_atom(const char* what) {
    if (tok_.kind != Token::kAtom) fail(std::string("expected ") + what);
    std::string s = std::move(tok_.text);
    advance();
    return s;
  }

  TreeBuilder::Handle parse_tree() {
    expect(Token::kOpen, "'('");
    const Token head = tok_;
    const std::string name = take_atom("'leaf' or a feature name");
    if (name == "leaf") {
      const Token at = tok_;
      const std::string cls = take_atom("class name");
      const auto c = space_.find_class(cls);
      if (!c) throw ParseError(at.line, at.column, "unknown class '" + cls + "'");
      expect(Token::kClose, "')'");
      return builder_.leaf(*c);
    }
    const auto f = space_.find_feature(name);
    if (!f) throw ParseError(head.line, head.column, "unknown feature '" + name + "'");
    if (on_path_[*f]) throw ParseError(head.line, head.column, "feature '" + name + "' repeated on a path");
    on_path_[*f] = 1;
    std::vector<std::optional<TreeBuilder::Handle>> branches(space_.num_values(*f));
    while (tok_.kind == Token::kOpen) {
      advance();
      const Token at = tok_;
      const std::string value = take_atom("value name");
      const auto v = space_.find_value(*f, value);
      if (!v) throw ParseError(at.line, at.column, "unknown value '" + value + "' for feature '" + name + "'");
      if (branches[*v]) throw ParseError(at.line, at.column, "duplicate branch '" + value + "'");
      branches[*v] = parse_tree();
      expect(Token::kClose, "')' closing branch");
    }
    std::vector<TreeBuilder::Handle> children;
    for (ValueId v = 0; v < branches.size(); ++v) {
      if (!branches[v]) fail("missing branch for value '" + space_.value_name(*f, v) + "' of feature '" + name + "'");
      children.push_back(*branches[v]);
    }
    expect(Token::kClose, "')' closing node");
    on_path_[*f] = 0;
    return builder_.split(*f, std::move(children));
  }

  TreeLexer lexer_;
  TreeBuilder builder_;
  const FeatureSpace& space_;
  std::vector<std::uint8_t> on_path_;
  Token tok_{Token::kEnd, "", 1, 1};
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Splits on commas, trimming each cell; records 1-based column of each cell.
inline std::vector<std::pair<std::string, std::size_t>> split_list(std::string_view line, std::size_t base_column) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::string_view raw = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
    out.emplace_back(std::string(trim(raw)), base_column + start + lead);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

}  // namespace detail

inline std::string serialize_tree(const DecisionTree& tree) {
  std::string out;
  detail::serialize_node(tree, tree.root(), 0, out);
  out += '\n';
  return out;
}

inline DecisionTree parse_tree(std::string_view text, SpacePtr space) {
  if (!space) throw ConfigError("parse_tree needs a feature space");
  return detail::TreeParser(text, std::move(space)).parse();
}

/// Path named by a leading `#space <path>` line, if any.
inline std::optional<std::string> space_header(std::string_view text) {
  for (const auto line : detail::lines_of(text)) {
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    constexpr std::string_view kTag = "#space";
    if (t.substr(0, kTag.size()) == kTag && (t.size() == kTag.size() || std::isspace(static_cast<unsigned char>(t[kTag.size()])))) {
      const auto path = detail::trim(t.substr(kTag.size()));
      if (!path.empty()) return std::string(path);
    }
    if (t.front() != '#') break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Feature-space file
//
//   classes: c0,c1,...
//   feature <name>: v0,v1,...     (one line per feature, in id order)
// ---------------------------------------------------------------------------

inline std::string serialize_space(const FeatureSpace& space) {
  std::string out = "classes: ";
  for (ClassId c = 0; c < space.num_classes(); ++c) {
    if (c) out += ',';
    out += space.class_name(c);
  }
  out += '\n';
  for (FeatureId f = 0; f < space.num_features(); ++f) {
    out += "feature " + space.feature_name(f) + ": ";
    for (ValueId v = 0; v < space.num_values(f); ++v) {
      if (v) out += ',';
      out += space.value_name(f, v);
    }
    out += '\n';
  }
  return out;
}

inline FeatureSpace parse_space(std::string_view text) {
  std::optional<std::vector<std::string>> classes;
  std::vector<std::string> features;
  std::vector<std::vector<std::string>> values;
  const auto lines = detail::lines_of(text);
  std::size_t last_line = 1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = lines[i];
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    last_line = lineno;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(lineno, 1, "expected ':'");
    const auto key = detail::trim(line.substr(0, colon));
    auto items = detail::split_list(line.substr(colon + 1), colon + 2);
    std::vector<std::string> names;
    for (auto& [name, col] : items) {
      if (!detail::is_valid_name(name)) throw ParseError(lineno, col, "invalid name '" + name + "'");
      names.push_back(std::move(name));
    }
    if (!classes) {
      if (key != "classes") throw ParseError(lineno, 1, "first line must be 'classes: ...'");
      classes = std::move(names);
      continue;
    }
    constexpr std::string_view kFeature = "feature ";
    if (key.substr(0, kFeature.size()) != kFeature) throw ParseError(lineno, 1, "expected 'feature <name>: ...'");
    const auto fname = detail::trim(key.substr(kFeature.size()));
    if (!detail::is_valid_name(fname)) throw ParseError(lineno, 9, "invalid feature name");
    features.emplace_back(fname);
    values.push_back(std::move(names));
  }
  if (!classes) throw ParseError(1, 1, "missing 'classes:' line");
  try {
    return FeatureSpace(std::move(features), std::move(values), std::move(*classes));
  } catch (const ConfigError& e) {
    throw ParseError(last_line, 1, e.what());
  }
}

// ---------------------------------------------------------------------------
// Dataset CSV: header = feature names in id order, then `class`; one row
// per instance occurrence.
// ---------------------------------------------------------------------------

inline std::string serialize_dataset(const Dataset& d) {
  const FeatureSpace& space = d.space();
  std::string out;
  for (FeatureId f = 0; f < space.num_features(); ++f) out += space.feature_name(f) + ',';
  out += "class\n";
  for (const auto& [x, e] : d) {
    std::string row;
    for (FeatureId f = 0; f < space.num_features(); ++f) row += space.value_name(f, x[f]) + ',';
    row += space.class_name(e.cls);
    row += '\n';
    for (std::uint64_t i = 0; i < e.count; ++i) out += row;
  }
  return out;
}

inline Dataset parse_dataset(std::string_view text, SpacePtr space) {
  if (!space) throw ConfigError("parse_dataset needs a feature space");
  const FeatureSpace& sp = *space;
  Dataset d(space);
  const auto lines = detail::lines_of(text);
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (detail::trim(lines[i]).empty()) continue;
    const auto cells = detail::split_list(lines[i], 1);
    if (cells.size() != sp.num_features() + 1) {
      throw ParseError(lineno, 1, "expected " + std::to_string(sp.num_features() + 1) + " cells, got " + std::to_string(cells.size()));
    }
    if (!header_seen) {
      for (FeatureId f = 0; f < sp.num_features(); ++f) {
        if (cells[f].first != sp.feature_name(f)) {
          throw ParseError(lineno, cells[f].second, "header expects feature '" + sp.feature_name(f) + "'");
        }
      }
      if (cells.back().first != "class") throw ParseError(lineno, cells.back().second, "last header cell must be 'class'");
      header_seen = true;
      continue;
    }
    Input x{std::vector<ValueId>(sp.num_features())};
    for (FeatureId f = 0; f < sp.num_features(); ++f) {
      const auto v = sp.find_value(f, cells[f].first);
      if (!v) throw ParseError(lineno, cells[f].second, "unknown value '" + cells[f].first + "' for feature '" + sp.feature_name(f) + "'");
      x.values[f] = *v;
    }
    const auto c = sp.find_class(cells.back().first);
    if (!c) throw ParseError(lineno, cells.back().second, "unknown class '" + cells.back().first + "'");
    try {
      d.add(x, *c);
    } catch (const ConfigError& e) {
      throw ParseError(lineno, 1, e.what());
    }
  }
  if (!header_seen) throw ParseError(1, 1, "missing header");
  return d;
}

// ---------------------------------------------------------------------------
// Files. Trees and datasets are written with a sidecar `<stem>.space` file;
// tree files reference it through their `#space` header.
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline std::filesystem::path sidecar_space_path(const std::filesystem::path& path) {
  auto p = path;
  p.replace_extension(".space");
  return p;
}

inline SpacePtr load_space(const std::filesystem::path& path) {
  try {
    return make_space(parse_space(read_text_file(path)));
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline void save_tree(const std::filesystem::path& path, const DecisionTree& tree) {
  const auto space_path = sidecar_space_path(path);
  write_text_file(space_path, serialize_space(tree.space()));
  write_text_file(path, "#space " + space_path.filename().string() + "\n" + serialize_tree(tree));
}

/// Loads a tree; without an explicit space, the `#space` header is resolved
/// relative to the tree file's directory.
inline DecisionTree load_tree(const std::filesystem::path& path, SpacePtr space = nullptr) {
  const std::string text = read_text_file(path);
  if (!space) {
    const auto header = space_header(text);
    if (!header) throw Error(path.string() + ": no '#space' header and no feature space given");
    std::filesystem::path sp = *header;
    if (sp.is_relative()) sp = path.parent_path() / sp;
    space = load_space(sp);
  }
  try {
    return parse_tree(text, std::move(space));
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline void save_dataset(const std::filesystem::path& path, const Dataset& d) {
  write_text_file(sidecar_space_path(path), serialize_space(d.space()));
  write_text_file(path, serialize_dataset(d));
}

/// Loads a dataset CSV; without an explicit space, reads the sidecar.
inline Dataset load_dataset(const std::filesystem::path& path, SpacePtr space = nullptr) {
  if (!space) space = load_space(sidecar_space_path(path));
  try {
    return parse_dataset(read_text_file(path), std::move(space));
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace dtbench
