#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kripke.hpp"
#include "parser.hpp"

namespace causal {

using Multiset = std::vector<Formula>;

inline std::size_t count_of(const Multiset& xs, const Formula& f) {
  return static_cast<std::size_t>(std::count(xs.begin(), xs.end(), f));
}

// Removes the last occurrence; false if absent.
inline bool remove_one(Multiset& xs, const Formula& f) {
  auto it = std::find(xs.rbegin(), xs.rend(), f);
  if (it == xs.rend()) return false;
  xs.erase(std::next(it).base());
  return true;
}

inline bool remove_n(Multiset& xs, const Formula& f, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!remove_one(xs, f)) return false;
  return true;
}

inline Multiset plus(Multiset a, const Multiset& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline bool same_multiset(Multiset a, Multiset b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

struct Sequent {
  Multiset left;
  Multiset right;
  friend bool operator==(const Sequent&, const Sequent&) = default;  // ordered
};

inline bool same_sequent(const Sequent& a, const Sequent& b) {
  return same_multiset(a.left, b.left) && same_multiset(a.right, b.right);
}

inline std::string join(const Multiset& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += to_string(xs[i]);
  }
  return out;
}

inline std::string to_string(const Sequent& s) {
  std::string l = join(s.left), r = join(s.right);
  return l + (l.empty() ? "" : " ") + "⊢" + (r.empty() ? "" : " ") + r;
}

inline Sequent parse_sequent(std::string_view text, const ParseOptions& opts = {}) {
  auto st = parse_sequent_text(text, opts);
  return {std::move(st.left), std::move(st.right)};
}

enum class Rule {
  Ax, BotL, TopR, LW, RW, LC, RC, NotL, NotR, AndL, AndR, OrL, OrR, ImpL, ImpR, BoxR, BoxL, Multicut
};

inline constexpr std::string_view rule_names[] = {
    "Ax", "BotL", "TopR", "LW", "RW", "LC", "RC", "NotL", "NotR", "AndL",
    "AndR", "OrL", "OrR", "ImpL", "ImpR", "BoxR", "BoxL", "Multicut"};

inline std::string_view to_string(Rule r) { return rule_names[static_cast<int>(r)]; }

inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(rule_names)); ++i)
    if (rule_names[i] == s) return static_cast<Rule>(i);
  return std::nullopt;
}

struct RuleData {
  std::optional<Formula> principal;    // cut formula for Multicut
  ExplanationSet set;                  // BoxR
  std::vector<ExplanationSet> family;  // BoxL, canonical bitmask order
  std::size_t m = 0, n = 0;            // Multicut multiplicities
};

struct ProofNode;
using ProofTree = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Sequent conclusion;
  Rule rule;
  std::vector<ProofTree> premises;
  RuleData data;
};

inline ProofTree make_proof(Rule rule, Sequent conclusion, std::vector<ProofTree> premises = {},
                            RuleData data = {}) {
  return std::make_shared<const ProofNode>(
      ProofNode{std::move(conclusion), rule, std::move(premises), std::move(data)});
}

inline ProofTree make_proof(Rule rule, Sequent conclusion, std::vector<ProofTree> premises, Formula principal) {
  RuleData d;
  d.principal = std::move(principal);
  return make_proof(rule, std::move(conclusion), std::move(premises), std::move(d));
}

inline ProofTree with_conclusion(const ProofTree& t, Sequent s) {
  return make_proof(t->rule, std::move(s), t->premises, t->data);
}

inline bool is_cut_free(const ProofTree& t) {
  if (t->rule == Rule::Multicut) return false;
  return std::all_of(t->premises.begin(), t->premises.end(), [](const ProofTree& p) { return is_cut_free(p); });
}

inline std::size_t count_cuts(const ProofTree& t) {
  std::size_t c = t->rule == Rule::Multicut ? 1 : 0;
  for (const auto& p : t->premises) c += count_cuts(p);
  return c;
}

inline std::size_t proof_size(const ProofTree& t) {
  std::size_t c = 1;
  for (const auto& p : t->premises) c += proof_size(p);
  return c;
}

inline std::size_t proof_height(const ProofTree& t) {
  std::size_t h = 0;
  for (const auto& p : t->premises) h = std::max(h, proof_height(p));
  return h + 1;
}

// --- text serialization -------------------------------------------------------
// One node per line, two spaces of indentation per depth:
//   RULE | left ⊢ right | {key=value; ...}

namespace detail {

inline std::string set_text(const ExplanationSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

inline ExplanationSet parse_set(std::string_view text) {
  ExplanationSet out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t c = text.find(',', start);
    out.push_back(std::stoul(std::string(trim(text.substr(start, c == text.npos ? text.npos : c - start)))));
    if (c == text.npos) break;
    start = c + 1;
  }
  return out;
}

inline std::string data_text(const ProofNode& n) {
  std::vector<std::string> parts;
  if (n.data.principal) parts.push_back("p=" + to_string(*n.data.principal));
  if (n.rule == Rule::BoxR) parts.push_back("set=" + set_text(n.data.set));
  if (n.rule == Rule::BoxL) {
    std::string fam;
    for (const auto& s : n.data.family) fam += "[" + set_text(s) + "]";
    parts.push_back("family=" + fam);
  }
  if (n.rule == Rule::Multicut) {
    parts.push_back("m=" + std::to_string(n.data.m));
    parts.push_back("n=" + std::to_string(n.data.n));
  }
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out + "}";
}

inline void write_proof(std::string& out, const ProofTree& t, std::size_t depth) {
  out.append(2 * depth, ' ');
  out += to_string(t->rule);
  out += " | ";
  out += to_string(t->conclusion);
  out += " | ";
  out += data_text(*t);
  out += '\n';
  for (const auto& p : t->premises) write_proof(out, p, depth + 1);
}

}  // namespace detail

inline std::string serialize_proof(const ProofTree& t) {
  std::string out;
  detail::write_proof(out, t, 0);
  return out;
}

inline ProofTree parse_proof(std::string_view text) {
  struct Pending {
    std::size_t depth;
    Sequent conclusion;
    Rule rule;
    RuleData data;
    std::vector<ProofTree> premises;
  };
  std::vector<Pending> stack;
  ProofTree root;
  auto close_to = [&](std::size_t depth) {
    while (!stack.empty() && stack.back().depth >= depth) {
      Pending p = std::move(stack.back());
      stack.pop_back();
      ProofTree t = make_proof(p.rule, std::move(p.conclusion), std::move(p.premises), std::move(p.data));
      if (stack.empty()) {
        if (root) throw ParseError(0, "proof text has more than one root");
        root = t;
      } else {
        stack.back().premises.push_back(t);
      }
    }
  };
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, (nl == text.npos ? text.size() : nl) - pos);
    std::size_t line_start = pos;
    pos = nl == text.npos ? text.size() : nl + 1;
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::size_t indent = line.find_first_not_of(' ');
    auto err = [&](std::size_t col, const std::string& what) -> ParseError {
      return ParseError(line_start + col, what, line_no, col + 1);
    };
    if (indent % 2) throw err(indent, "odd indentation");
    std::size_t depth = indent / 2;
    if (!stack.empty() && depth > stack.back().depth + 1) throw err(indent, "indentation skips a level");
    if (stack.empty() && root) throw err(indent, "proof text has more than one root");
    if (stack.empty() && depth != 0) throw err(indent, "root must not be indented");
    std::size_t bar = line.find(" | ", indent);
    std::size_t data_at = line.find(" | {", bar == line.npos ? indent : bar + 3);
    if (bar == line.npos || data_at == line.npos || line.back() != '}')
      throw err(indent, "expected 'RULE | sequent | {data}'");
    auto rule = rule_from_name(line.substr(indent, bar - indent));
    if (!rule) throw err(indent, "unknown rule '" + std::string(line.substr(indent, bar - indent)) + "'");
    Sequent seq;
    try {
      seq = parse_sequent(line.substr(bar + 3, data_at - bar - 3));
    } catch (const ParseError& e) {
      throw err(bar + 3 + e.offset(), e.detail());
    }
    RuleData data;
    std::string_view body = line.substr(data_at + 4, line.size() - data_at - 5);
    std::size_t start = 0;
    while (start < body.size()) {
      std::size_t semi = body.find("; ", start);
      std::string_view part = body.substr(start, semi == body.npos ? body.npos : semi - start);
      std::size_t col = data_at + 4 + start;
      start = semi == body.npos ? body.size() : semi + 2;
      std::size_t eq = part.find('=');
      if (eq == part.npos) throw err(col, "expected key=value");
      std::string_view key = part.substr(0, eq), value = part.substr(eq + 1);
      try {
        if (key == "p") {
          data.principal = parse_formula(value);
        } else if (key == "set") {
          data.set = detail::parse_set(value);
        } else if (key == "family") {
          std::size_t i = 0;
          while (i < value.size()) {
            if (value[i] != '[') throw err(col, "malformed family");
            std::size_t close = value.find(']', i);
            if (close == value.npos) throw err(col, "malformed family");
            data.family.push_back(detail::parse_set(value.substr(i + 1, close - i - 1)));
            i = close + 1;
          }
        } else if (key == "m") {
          data.m = std::stoul(std::string(value));
        } else if (key == "n") {
          data.n = std::stoul(std::string(value));
        } else {
          throw err(col, "unknown key '" + std::string(key) + "'");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        throw err(col, "malformed value for '" + std::string(key) + "'");
      }
    }
    close_to(depth);
    stack.push_back({depth, std::move(seq), *rule, std::move(data), {}});
  }
  close_to(0);
  if (!root) throw ParseError(0, "empty proof text");
  return root;
}

}  // namespace causal
