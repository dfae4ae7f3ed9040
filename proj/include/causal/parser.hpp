#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"
#include "model.hpp"
#include "theory.hpp"

namespace causal {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(format(offset, what, line, column)),
        offset_(offset), line_(line), column_(column), detail_(what) {}

  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }      // 1-based, 0 when unknown
  std::size_t column() const noexcept { return column_; }  // 1-based, 0 when unknown
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(std::size_t offset, const std::string& what, std::size_t line, std::size_t col) {
    if (line) return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what;
    return "offset " + std::to_string(offset) + ": " + what;
  }
  std::size_t offset_, line_, column_;
  std::string detail_;
};

struct ParseOptions {
  const Universe* universe = nullptr;  // reject undeclared atoms when set
  std::string modality = "[]";         // "[]" for causal formulas, "C" for S5
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  Formula parse_all() {
    Formula f = implication();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at(std::string_view tok) {
    skip_ws();
    return s_.substr(pos_, tok.size()) == tok;
  }
  bool at_disjunction() {
    if (!at("|")) return false;
    return pos_ + 1 >= s_.size() || (s_[pos_ + 1] != '>' && s_[pos_ + 1] != '-');
  }
  bool at_modality() {
    skip_ws();
    if (opts_.modality == "[]") return at("[]");
    if (s_.substr(pos_, opts_.modality.size()) != opts_.modality) return false;
    std::size_t end = pos_ + opts_.modality.size();
    return end >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_');
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (at("->")) {
      pos_ += 2;
      return Formula::implication(lhs, implication());
    }
    return lhs;
  }
  Formula disjunction() {
    Formula acc = conjunction();
    while (at_disjunction()) {
      ++pos_;
      acc = Formula::disjunction(acc, conjunction());
    }
    return acc;
  }
  Formula conjunction() {
    Formula acc = unary();
    while (at("&")) {
      ++pos_;
      acc = Formula::conjunction(acc, unary());
    }
    return acc;
  }
  Formula unary() {
    if (at("!")) {
      ++pos_;
      return Formula::negation(unary());
    }
    if (at_modality()) {
      pos_ += opts_.modality.size();
      return Formula::box(unary());
    }
    return primary();
  }
  Formula primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Formula f = implication();
      if (!at(")")) fail("expected ')'");
      ++pos_;
      return f;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "true") return Formula::top();
      if (name == "false") return Formula::bottom();
      if (opts_.universe && !opts_.universe->contains(name))
        throw ParseError(start, "undeclared atom '" + name + "'");
      return Formula::atom(std::move(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Re-anchor an offset-only error to a position inside a larger text.
[[noreturn]] inline void rethrow_at(const ParseError& e, std::size_t base, std::size_t line, std::size_t line_start) {
  std::size_t abs = base + e.offset();
  throw ParseError(abs, e.detail(), line, abs - line_start + 1);
}

}  // namespace detail

inline Formula parse_formula(std::string_view text, const ParseOptions& opts = {}) {
  return detail::FormulaParser(text, opts).parse_all();
}

inline Formula parse_formula(std::string_view text, const Universe& u) {
  ParseOptions opts;
  opts.universe = &u;
  return parse_formula(text, opts);
}

// Comma-separated formula list; an all-blank list is empty.
inline std::vector<Formula> parse_formula_list(std::string_view text, const ParseOptions& opts = {}) {
  std::vector<Formula> out;
  if (detail::trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    try {
      out.push_back(parse_formula(piece, opts));
    } catch (const ParseError& e) {
      throw ParseError(start + e.offset(), e.detail());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct SequentText {
  std::vector<Formula> left, right;
};

inline SequentText parse_sequent_text(std::string_view text, const ParseOptions& opts = {}) {
  std::size_t turnstile = text.find("|-");
  std::size_t width = 2;
  if (turnstile == std::string_view::npos) {
    turnstile = text.find("⊢");
    width = std::string_view("⊢").size();
  }
  if (turnstile == std::string_view::npos) throw ParseError(text.size(), "expected '|-'");
  SequentText out;
  out.left = parse_formula_list(text.substr(0, turnstile), opts);
  try {
    out.right = parse_formula_list(text.substr(turnstile + width), opts);
  } catch (const ParseError& e) {
    throw ParseError(turnstile + width + e.offset(), e.detail());
  }
  return out;
}

// Line-oriented reader shared by the DSLs: strips '#' comments, hands each
// "key: value" line to a callback along with position data for errors.
struct DslLine {
  std::size_t number;      // 1-based
  std::size_t line_start;  // offset of the line in the text
  std::string_view key;
  std::string_view value;
  std::size_t value_offset;  // offset of value in the text
};

template <class F>
void for_each_dsl_line(std::string_view text, F&& f) {
  std::size_t pos = 0, number = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!detail::trim(line).empty()) {
      std::size_t colon = line.find(':');
      if (colon == std::string_view::npos) {
        std::size_t lead = line.find_first_not_of(" \t");
        throw ParseError(pos + lead, "expected 'key: value'", number, lead + 1);
      }
      std::string_view key = detail::trim(line.substr(0, colon));
      std::size_t voff = colon + 1;
      f(DslLine{number, pos, key, line.substr(voff), pos + voff});
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Theory DSL:
//   atoms: p q r
//   rule: <formula> |> <formula>
inline CausalTheory parse_theory(std::string_view text) {
  std::vector<std::string> atoms;
  struct PendingRule {
    DslLine line;
    std::size_t sep;
  };
  std::vector<PendingRule> pending;
  for_each_dsl_line(text, [&](const DslLine& l) {
    if (l.key == "atoms") {
      for (auto& w : split_words(l.value)) {
        if (!is_identifier(w) || w == "true" || w == "false") {
          std::size_t at = l.value.find(w);
          throw ParseError(l.value_offset + at, "invalid atom name '" + w + "'", l.number,
                           l.value_offset + at - l.line_start + 1);
        }
        if (std::find(atoms.begin(), atoms.end(), w) == atoms.end()) atoms.push_back(w);
      }
    } else if (l.key == "rule") {
      std::size_t sep = l.value.find("|>");
      if (sep == std::string_view::npos)
        throw ParseError(l.value_offset + l.value.size(), "expected '|>'", l.number,
                         l.value_offset + l.value.size() - l.line_start + 1);
      pending.push_back({l, sep});
    } else {
      throw ParseError(l.line_start, "unknown directive '" + std::string(l.key) + "'", l.number, 1);
    }
  });
  Universe u(atoms);
  CausalTheory theory(u);
  ParseOptions opts;
  opts.universe = &u;
  for (const auto& p : pending) {
    const auto& l = p.line;
    Formula body, head;
    try {
      body = parse_formula(l.value.substr(0, p.sep), opts);
    } catch (const ParseError& e) {
      detail::rethrow_at(e, l.value_offset, l.number, l.line_start);
    }
    try {
      head = parse_formula(l.value.substr(p.sep + 2), opts);
    } catch (const ParseError& e) {
      detail::rethrow_at(e, l.value_offset + p.sep + 2, l.number, l.line_start);
    }
    theory.add({body, head});
  }
  return theory;
}

inline std::string to_dsl(const CausalTheory& t) {
  std::string out = "atoms:";
  for (const auto& a : t.universe().atoms()) out += " " + a;
  out += '\n';
  for (const auto& r : t.rules()) out += "rule: " + to_string(r) + '\n';
  return out;
}

}  // namespace causal
