#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

enum class Op : std::uint8_t { Atom, Top, Bottom, Not, And, Or, Implies, Box };

// Immutable formula tree with shared structure. Copying is a refcount bump.
class Formula {
 public:
  Formula();  // ⊤

  static Formula atom(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula box(Formula f);

  Op op() const noexcept;
  const std::string& name() const noexcept;
  const Formula& lhs() const noexcept;  // operand of unary nodes too
  const Formula& rhs() const noexcept;
  std::size_t hash() const noexcept;
  std::size_t size() const noexcept;
  int modal_depth() const noexcept;
  bool is_modal() const noexcept { return modal_depth() > 0; }
  bool is_atom() const noexcept { return op() == Op::Atom; }
  bool is_binary() const noexcept {
    return op() == Op::And || op() == Op::Or || op() == Op::Implies;
  }
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, std::string name, const Formula* a, const Formula* b);
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  std::string name;
  Formula a, b;
  std::size_t hash;
  std::size_t size;
  int depth;
  Node(Op o, std::string n, Formula x, Formula y, std::size_t h, std::size_t s, int d)
      : op(o), name(std::move(n)), a(std::move(x)), b(std::move(y)), hash(h), size(s), depth(d) {}
};

namespace detail {
inline std::size_t mix(std::size_t h, std::size_t v) noexcept {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace detail

inline Formula Formula::make(Op op, std::string name, const Formula* a, const Formula* b) {
  std::size_t h = std::hash<int>{}(static_cast<int>(op));
  std::size_t sz = 1;
  int depth = 0;
  if (op == Op::Atom) h = detail::mix(h, std::hash<std::string>{}(name));
  Formula fa(nullptr), fb(nullptr);
  if (a) {
    fa = *a;
    h = detail::mix(h, a->hash());
    sz += a->size();
    depth = a->modal_depth();
  }
  if (b) {
    fb = *b;
    h = detail::mix(h, b->hash());
    sz += b->size();
    depth = std::max(depth, b->modal_depth());
  }
  if (op == Op::Box) ++depth;
  return Formula(std::make_shared<const Node>(op, std::move(name), std::move(fa), std::move(fb), h,
                                              sz, depth));
}

// Leaves carry null children; lhs()/rhs() of a leaf return the leaf itself.
inline Formula::Formula() {
  static const std::shared_ptr<const Node> top_node = std::make_shared<const Node>(
      Op::Top, std::string{}, Formula(nullptr), Formula(nullptr),
      detail::mix(std::hash<int>{}(static_cast<int>(Op::Top)), 0), 1, 0);
  node_ = top_node;
}

inline Formula Formula::atom(std::string name) { return make(Op::Atom, std::move(name), nullptr, nullptr); }
inline Formula Formula::top() { return Formula(); }
inline Formula Formula::bottom() {
  static const Formula f = make(Op::Bottom, {}, nullptr, nullptr);
  return f;
}
inline Formula Formula::negation(Formula f) { return make(Op::Not, {}, &f, nullptr); }
inline Formula Formula::conjunction(Formula a, Formula b) { return make(Op::And, {}, &a, &b); }
inline Formula Formula::disjunction(Formula a, Formula b) { return make(Op::Or, {}, &a, &b); }
inline Formula Formula::implication(Formula a, Formula b) { return make(Op::Implies, {}, &a, &b); }
inline Formula Formula::box(Formula f) { return make(Op::Box, {}, &f, nullptr); }

inline Op Formula::op() const noexcept { return node_->op; }
inline const std::string& Formula::name() const noexcept { return node_->name; }
inline const Formula& Formula::lhs() const noexcept { return node_->a.node_ ? node_->a : *this; }
inline const Formula& Formula::rhs() const noexcept { return node_->b.node_ ? node_->b : *this; }
inline std::size_t Formula::hash() const noexcept { return node_->hash; }
inline std::size_t Formula::size() const noexcept { return node_->size; }
inline int Formula::modal_depth() const noexcept { return node_->depth; }

inline bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

// Structural order: by operator, then atom name, then children left to right.
inline std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  switch (a.op()) {
    case Op::Atom: return a.name().compare(b.name()) <=> 0;
    case Op::Top:
    case Op::Bottom: return std::strong_ordering::equal;
    case Op::Not:
    case Op::Box: return a.lhs() <=> b.lhs();
    default:
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
  }
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

using FormulaSet = std::set<Formula>;

// Right-nested folds; the empty conjunction is true, the empty disjunction false.
inline Formula conjoin(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = Formula::conjunction(*it, acc);
  return acc;
}

inline Formula disjoin(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::bottom();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = Formula::disjunction(*it, acc);
  return acc;
}

inline Formula iff(const Formula& a, const Formula& b) {
  return Formula::conjunction(Formula::implication(a, b), Formula::implication(b, a));
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Atom: out.insert(f.name()); break;
    case Op::Top:
    case Op::Bottom: break;
    case Op::Not:
    case Op::Box: collect_atoms(f.lhs(), out); break;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
  }
}

// Replace atoms through a name map; names absent from the map stay put.
template <class Map>
Formula rename_atoms(const Formula& f, const Map& names) {
  switch (f.op()) {
    case Op::Atom: {
      auto it = names.find(f.name());
      return it == names.end() ? f : Formula::atom(it->second);
    }
    case Op::Top:
    case Op::Bottom: return f;
    case Op::Not: return Formula::negation(rename_atoms(f.lhs(), names));
    case Op::Box: return Formula::box(rename_atoms(f.lhs(), names));
    case Op::And: return Formula::conjunction(rename_atoms(f.lhs(), names), rename_atoms(f.rhs(), names));
    case Op::Or: return Formula::disjunction(rename_atoms(f.lhs(), names), rename_atoms(f.rhs(), names));
    case Op::Implies:
      return Formula::implication(rename_atoms(f.lhs(), names), rename_atoms(f.rhs(), names));
  }
  return f;
}

// Precedence used by both the printer and the parser.
inline int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not:
    case Op::Box: return 4;
    default: return 5;
  }
}

struct PrintStyle {
  std::string box = "[]";
  bool space_after_box = false;
};

inline void print_formula(std::string& out, const Formula& f, const PrintStyle& style) {
  auto child = [&](const Formula& c, bool paren) {
    if (paren) out += '(';
    print_formula(out, c, style);
    if (paren) out += ')';
  };
  const int p = precedence(f.op());
  switch (f.op()) {
    case Op::Atom: out += f.name(); return;
    case Op::Top: out += "true"; return;
    case Op::Bottom: out += "false"; return;
    case Op::Not:
      out += '!';
      child(f.lhs(), precedence(f.lhs().op()) < p);
      return;
    case Op::Box:
      out += style.box;
      if (style.space_after_box) out += ' ';
      child(f.lhs(), precedence(f.lhs().op()) < p);
      return;
    case Op::And:
    case Op::Or:
      child(f.lhs(), precedence(f.lhs().op()) < p);
      out += f.op() == Op::And ? " & " : " | ";
      child(f.rhs(), precedence(f.rhs().op()) <= p);
      return;
    case Op::Implies:
      child(f.lhs(), precedence(f.lhs().op()) <= p);
      out += " -> ";
      child(f.rhs(), precedence(f.rhs().op()) < p);
      return;
  }
}

inline std::string to_string(const Formula& f, const PrintStyle& style = {}) {
  std::string out;
  print_formula(out, f, style);
  return out;
}

}  // namespace causal

template <>
struct std::hash<causal::Formula> {
  std::size_t operator()(const causal::Formula& f) const noexcept { return f.hash(); }
};
