#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "interpolation.hpp"
#include "parser.hpp"

namespace causal {

// Grounds are kept sorted and duplicate-free so that set equality is ==.
inline std::vector<Formula> as_ground_set(std::vector<Formula> fs) {
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

inline std::vector<Formula> ground_union(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  std::vector<Formula> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return as_ground_set(std::move(out));
}

struct Argument {
  Formula head;
  std::vector<Formula> grounds;

  Argument() = default;
  Argument(Formula h, std::vector<Formula> g) : head(std::move(h)), grounds(as_ground_set(std::move(g))) {}
  friend bool operator==(const Argument&, const Argument&) = default;
  friend auto operator<=>(const Argument& a, const Argument& b) {
    if (auto c = a.head <=> b.head; c != 0) return c;
    return std::lexicographical_compare_three_way(a.grounds.begin(), a.grounds.end(), b.grounds.begin(),
                                                  b.grounds.end());
  }
};

inline std::string to_string(const std::vector<Formula>& grounds) {
  if (grounds.empty()) return "∅";
  std::string out = "{";
  for (std::size_t i = 0; i < grounds.size(); ++i) out += (i ? ", " : "") + to_string(grounds[i]);
  return out + "}";
}

inline std::string to_string(const Argument& a) { return "(" + to_string(a.head) + ", " + to_string(a.grounds) + ")"; }

using Basics = std::vector<Argument>;  // sorted, duplicate-free

inline Basics as_basics(Basics b) {
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

inline Basics extend(const Basics& b, const Argument& a) {
  Basics out = b;
  out.push_back(a);
  return as_basics(std::move(out));
}

struct PJSequent {
  Basics basics;
  Argument goal;
  PJSequent() = default;
  PJSequent(Basics b, Argument g) : basics(as_basics(std::move(b))), goal(std::move(g)) {}
  friend bool operator==(const PJSequent&, const PJSequent&) = default;
};

enum class PJRule { Axiom, TopI, AndI, AndE1, AndE2, OrI1, OrI2, OrE, NotI, NotE, ImpI, ImpE, EFQ, RAA, OrEC };

inline const char* to_string(PJRule r) {
  switch (r) {
    case PJRule::Axiom: return "Axiom";
    case PJRule::TopI: return "⊤I";
    case PJRule::AndI: return "∧I";
    case PJRule::AndE1: return "∧E1";
    case PJRule::AndE2: return "∧E2";
    case PJRule::OrI1: return "∨I1";
    case PJRule::OrI2: return "∨I2";
    case PJRule::OrE: return "∨E";
    case PJRule::NotI: return "¬I";
    case PJRule::NotE: return "¬E";
    case PJRule::ImpI: return "→I";
    case PJRule::ImpE: return "→E";
    case PJRule::EFQ: return "EFQ";
    case PJRule::RAA: return "RAA";
    case PJRule::OrEC: return "∨EC";
  }
  return "?";
}

// Side data of classical or-elimination: gamma ⊢ ∧q ∨ ∧r classically, premises
// (c, gamma1 ∪ q) and (c, gamma2 ∪ r), conclusion (c, gamma ∪ gamma1 ∪ gamma2).
struct ClassicalSplit {
  std::vector<Formula> gamma, gamma1, gamma2, q, r;
};

struct PJNode;
using PJProof = std::shared_ptr<const PJNode>;

struct PJNode {
  PJRule rule;
  PJSequent sequent;
  std::vector<PJProof> premises;
  std::optional<ClassicalSplit> split;
};

inline PJProof make_pj(PJRule r, PJSequent s, std::vector<PJProof> premises = {},
                       std::optional<ClassicalSplit> split = std::nullopt) {
  return std::make_shared<const PJNode>(PJNode{r, std::move(s), std::move(premises), std::move(split)});
}

inline std::size_t pj_size(const PJProof& p) {
  std::size_t n = 1;
  for (const auto& q : p->premises) n += pj_size(q);
  return n;
}

inline bool uses_classical_split(const PJProof& p) {
  if (p->rule == PJRule::OrEC) return true;
  return std::any_of(p->premises.begin(), p->premises.end(), uses_classical_split);
}

struct PJCheckResult {
  bool ok = true;
  std::string reason;
  PJProof node;
  explicit operator bool() const noexcept { return ok; }
};

namespace detail {

class PJChecker {
 public:
  PJCheckResult run(const PJProof& p) {
    visit(p);
    return result_;
  }

 private:
  void fail(const PJProof& p, std::string why) {
    if (result_.ok) result_ = {false, std::string(to_string(p->rule)) + " at " + to_string(p->sequent.goal) + ": " + why, p};
  }

  bool visit(const PJProof& p) {
    for (const auto& q : p->premises)
      if (!visit(q)) return false;
    if (auto why = local(*p)) {
      fail(p, *why);
      return false;
    }
    return true;
  }

  static std::optional<std::string> local(const PJNode& n) {
    const auto& theta = n.sequent.basics;
    const Argument& goal = n.sequent.goal;
    const Formula& c = goal.head;
    const auto& g = goal.grounds;
    auto nonmodal = [](const Argument& a) {
      return !a.head.is_modal() &&
             std::none_of(a.grounds.begin(), a.grounds.end(), [](const Formula& f) { return f.is_modal(); });
    };
    if (!nonmodal(goal)) return "arguments must be nonmodal";
    const auto& ps = n.premises;
    auto arity = [&](std::size_t k) -> std::optional<std::string> {
      if (ps.size() != k) return "expected " + std::to_string(k) + " premises";
      return std::nullopt;
    };
    auto prem = [&](std::size_t i) -> const Argument& { return ps[i]->sequent.goal; };
    auto basics_are = [&](std::size_t i, const Basics& want) { return ps[i]->sequent.basics == want; };
    auto same_basics = [&]() -> std::optional<std::string> {
      for (std::size_t i = 0; i < ps.size(); ++i)
        if (!basics_are(i, theta)) return "premise " + std::to_string(i + 1) + " changes the basic arguments";
      return std::nullopt;
    };
    // Premise 0 proves (⊥ or q, g) over the basics extended by (x, ∅).
    auto discharge = [&](const Formula& x, const Formula& concl) -> std::optional<std::string> {
      if (auto e = arity(1)) return e;
      if (!basics_are(0, extend(theta, Argument(x, {})))) return "premise must add " + to_string(Argument(x, {}));
      if (prem(0).head != concl || prem(0).grounds != g) return "premise does not match";
      return std::nullopt;
    };

    switch (n.rule) {
      case PJRule::Axiom:
        if (auto e = arity(0)) return e;
        if (!std::binary_search(theta.begin(), theta.end(), goal)) return "not a basic argument";
        return std::nullopt;
      case PJRule::TopI:
        if (auto e = arity(0)) return e;
        if (c.op() != Op::Top || !g.empty()) return "conclusion must be (⊤, ∅)";
        return std::nullopt;
      case PJRule::AndI:
        if (auto e = arity(2)) return e;
        if (auto e = same_basics()) return e;
        if (c.op() != Op::And || prem(0).head != c.lhs() || prem(1).head != c.rhs()) return "heads do not match";
        if (g != ground_union(prem(0).grounds, prem(1).grounds)) return "grounds must be the union";
        return std::nullopt;
      case PJRule::AndE1:
      case PJRule::AndE2: {
        if (auto e = arity(1)) return e;
        if (auto e = same_basics()) return e;
        const Formula& h = prem(0).head;
        if (h.op() != Op::And || (n.rule == PJRule::AndE1 ? h.lhs() : h.rhs()) != c) return "heads do not match";
        if (prem(0).grounds != g) return "grounds must be kept";
        return std::nullopt;
      }
      case PJRule::OrI1:
      case PJRule::OrI2:
        if (auto e = arity(1)) return e;
        if (auto e = same_basics()) return e;
        if (c.op() != Op::Or || (n.rule == PJRule::OrI1 ? c.lhs() : c.rhs()) != prem(0).head)
          return "heads do not match";
        if (prem(0).grounds != g) return "grounds must be kept";
        return std::nullopt;
      case PJRule::OrE: {
        if (auto e = arity(3)) return e;
        const Argument& d = prem(0);
        if (!basics_are(0, theta)) return "premise 1 changes the basic arguments";
        if (d.head.op() != Op::Or) return "first premise must prove a disjunction";
        if (!basics_are(1, extend(theta, Argument(d.head.lhs(), d.grounds))) ||
            !basics_are(2, extend(theta, Argument(d.head.rhs(), d.grounds))))
          return "case premises must add the disjuncts with the disjunction's grounds";
        if (prem(1).head != c || prem(2).head != c) return "case heads do not match";
        if (g != ground_union(prem(1).grounds, prem(2).grounds)) return "grounds must be the union of the cases";
        return std::nullopt;
      }
      case PJRule::NotI:
        if (c.op() != Op::Not) return "conclusion must be a negation";
        return discharge(c.lhs(), Formula::bottom());
      case PJRule::NotE:
        if (auto e = arity(2)) return e;
        if (auto e = same_basics()) return e;
        if (c.op() != Op::Bottom || prem(1).head != Formula::negation(prem(0).head)) return "heads do not match";
        if (g != ground_union(prem(0).grounds, prem(1).grounds)) return "grounds must be the union";
        return std::nullopt;
      case PJRule::ImpI:
        if (c.op() != Op::Implies) return "conclusion must be an implication";
        return discharge(c.lhs(), c.rhs());
      case PJRule::ImpE:
        if (auto e = arity(2)) return e;
        if (auto e = same_basics()) return e;
        if (prem(1).head != Formula::implication(prem(0).head, c)) return "heads do not match";
        if (g != ground_union(prem(0).grounds, prem(1).grounds)) return "grounds must be the union";
        return std::nullopt;
      case PJRule::EFQ:
        if (auto e = arity(1)) return e;
        if (auto e = same_basics()) return e;
        if (prem(0).head.op() != Op::Bottom || prem(0).grounds != g) return "premise must be (⊥, grounds)";
        return std::nullopt;
      case PJRule::RAA: return discharge(Formula::negation(c), Formula::bottom());
      case PJRule::OrEC: {
        if (auto e = arity(2)) return e;
        if (auto e = same_basics()) return e;
        if (!n.split) return "missing classical side data";
        const auto& s = *n.split;
        if (prem(0).head != c || prem(1).head != c) return "heads do not match";
        if (prem(0).grounds != ground_union(s.gamma1, s.q) || prem(1).grounds != ground_union(s.gamma2, s.r))
          return "premise grounds do not match the split";
        if (g != ground_union(s.gamma, ground_union(s.gamma1, s.gamma2))) return "conclusion grounds do not match";
        if (!classical_entails(s.gamma, {Formula::disjunction(conjoin(s.q), conjoin(s.r))}))
          return "side entailment fails";
        return std::nullopt;
      }
    }
    return "unknown rule";
  }

  PJCheckResult result_;
};

inline void collect_atoms(const Argument& a, std::set<std::string>& out) {
  collect_atoms(a.head, out);
  for (const auto& f : a.grounds) collect_atoms(f, out);
}

}  // namespace detail

inline PJCheckResult check_pj_proof(const PJProof& t) { return detail::PJChecker().run(t); }

inline CausalRule basic_rule(const Argument& a) { return {conjoin(a.grounds), a.head}; }

inline CausalTheory basics_theory(const Basics& b, const Universe& u) {
  CausalTheory t(u);
  for (const auto& a : b) t.add(basic_rule(a));
  return t;
}

struct ModalTranslation {
  CausalTheory theory;
  Sequent sequent;
};

// One rule ∧grounds ▷ head per basic argument, and the sequent grounds ⊢ □head.
inline ModalTranslation modal_translation(const PJSequent& s) {
  std::set<std::string> atoms;
  for (const auto& a : s.basics) detail::collect_atoms(a, atoms);
  detail::collect_atoms(s.goal, atoms);
  Universe u(std::vector<std::string>(atoms.begin(), atoms.end()));
  return {basics_theory(s.basics, u), Sequent{s.goal.grounds, {Formula::box(s.goal.head)}}};
}

// Rewrites a formula over the box of theta ∪ {extra} into one over the box of
// theta with the same semantic value.
inline Formula expand_modality(const Formula& f, const CausalTheory& theta, const CausalRule& extra) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bottom: return f;
    case Op::Not: return Formula::negation(expand_modality(f.lhs(), theta, extra));
    case Op::And:
      return Formula::conjunction(expand_modality(f.lhs(), theta, extra), expand_modality(f.rhs(), theta, extra));
    case Op::Or:
      return Formula::disjunction(expand_modality(f.lhs(), theta, extra), expand_modality(f.rhs(), theta, extra));
    case Op::Implies:
      return Formula::implication(expand_modality(f.lhs(), theta, extra), expand_modality(f.rhs(), theta, extra));
    case Op::Box: {
      Formula inner = expand_modality(f.lhs(), theta, extra);
      return Formula::disjunction(
          Formula::conjunction(extra.body, Formula::box(Formula::implication(extra.head, inner))),
          Formula::box(inner));
    }
  }
  return f;
}

// ∧Γ → □p for the argument (p, Γ).
inline Formula argument_formula(const Argument& a) {
  return Formula::implication(conjoin(a.grounds), Formula::box(a.head));
}

// The node's premises, translated and expanded into the modality of the
// node's own basics, must entail its translated conclusion at every world of
// the canonical model. ∨EC contributes its side entailment as one more premise.
inline bool verify_rule_soundness(const PJNode& node) {
  std::set<std::string> atoms;
  auto gather = [&](const PJSequent& s) {
    for (const auto& a : s.basics) detail::collect_atoms(a, atoms);
    detail::collect_atoms(s.goal, atoms);
  };
  gather(node.sequent);
  for (const auto& p : node.premises) gather(p->sequent);
  if (node.split)
    for (const auto* fs : {&node.split->gamma, &node.split->q, &node.split->r})
      for (const auto& f : *fs) collect_atoms(f, atoms);
  Universe u(std::vector<std::string>(atoms.begin(), atoms.end()));
  const Basics& theta = node.sequent.basics;
  Semantics sem(basics_theory(theta, u));

  ModelSet premises = ModelSet::all(u.size());
  for (const auto& p : node.premises) {
    const Basics& pb = p->sequent.basics;
    Formula f = argument_formula(p->sequent.goal);
    if (std::includes(pb.begin(), pb.end(), theta.begin(), theta.end())) {
      Basics extras;
      std::set_difference(pb.begin(), pb.end(), theta.begin(), theta.end(), std::back_inserter(extras));
      // Peel the extras off one at a time, innermost modality first.
      for (std::size_t i = extras.size(); i-- > 0;) {
        Basics base = theta;
        base.insert(base.end(), extras.begin(), extras.begin() + static_cast<std::ptrdiff_t>(i));
        f = expand_modality(f, basics_theory(as_basics(base), u), basic_rule(extras[i]));
      }
      premises &= sem.value(f);
    } else {
      premises &= Semantics(basics_theory(pb, u)).value(f);
    }
  }
  if (node.split)
    premises &= sem.value(Formula::implication(
        conjoin(node.split->gamma), Formula::disjunction(conjoin(node.split->q), conjoin(node.split->r))));
  return premises.subset_of(sem.value(argument_formula(node.sequent.goal)));
}

// True when the grounds are a union of ground sets of basic arguments.
inline bool grounds_are_union_of_bodies(const std::vector<Formula>& grounds, const Basics& basics) {
  std::vector<Formula> covered;
  for (const auto& a : basics)
    if (std::includes(grounds.begin(), grounds.end(), a.grounds.begin(), a.grounds.end()))
      covered = ground_union(covered, a.grounds);
  return covered == grounds;
}

// ---------------------------------------------------------------------------
// Completeness extraction.

enum class ExtractionStatus { Extracted, Unprovable, NoExplanation };

struct PJExtraction {
  ExtractionStatus status = ExtractionStatus::Unprovable;
  PJProof proof;
  std::string message;
  explicit operator bool() const noexcept { return status == ExtractionStatus::Extracted; }
};

namespace detail {

// Natural-deduction style derivations inside the argument system. Literal
// assumptions enter as basic arguments with empty grounds.
class PJBuilder {
 public:
  static PJProof axiom(const Basics& b, const Argument& a) { return make_pj(PJRule::Axiom, {b, a}); }

  // Same derivation over a larger set of basic arguments.
  static PJProof lift(const PJProof& p, const Argument& extra) {
    std::vector<PJProof> premises;
    for (const auto& q : p->premises) premises.push_back(lift(q, extra));
    return make_pj(p->rule, {extend(p->sequent.basics, extra), p->sequent.goal}, std::move(premises), p->split);
  }

  static PJProof not_elim(const Basics& b, const PJProof& pos, const PJProof& neg) {
    return make_pj(PJRule::NotE,
                   {b, Argument(Formula::bottom(), ground_union(pos->sequent.goal.grounds, neg->sequent.goal.grounds))},
                   {pos, neg});
  }

  // (x ∨ ¬x, ∅).
  static PJProof excluded_middle(const Basics& b, const Formula& x) {
    const Formula nx = Formula::negation(x);
    const Formula em = Formula::disjunction(x, nx);
    const Argument assume_not_em(Formula::negation(em), {});
    const Basics b1 = extend(b, assume_not_em);
    const Basics b2 = extend(b1, Argument(x, {}));
    PJProof em_from_x = make_pj(PJRule::OrI1, {b2, Argument(em, {})}, {axiom(b2, Argument(x, {}))});
    PJProof bot2 = not_elim(b2, em_from_x, axiom(b2, assume_not_em));
    PJProof not_x = make_pj(PJRule::NotI, {b1, Argument(nx, {})}, {bot2});
    PJProof em_from_nx = make_pj(PJRule::OrI2, {b1, Argument(em, {})}, {not_x});
    PJProof bot1 = not_elim(b1, em_from_nx, axiom(b1, assume_not_em));
    return make_pj(PJRule::RAA, {b, Argument(em, {})}, {bot1});
  }

  // With a literal (x, ∅) or (¬x, ∅) in b for every atom of f, derives (f, ∅)
  // when v satisfies f and (¬f, ∅) otherwise.
  static PJProof evaluate(const Basics& b, const Formula& f, const std::map<std::string, bool>& v) {
    auto truth = [&](const Formula& g) {
      std::set<std::string> as;
      collect_atoms(g, as);
      std::vector<std::string> names(as.begin(), as.end());
      Universe u(names);
      ModelIndex m = 0;
      for (std::size_t i = 0; i < names.size(); ++i)
        if (v.at(names[i])) m |= ModelIndex{1} << (names.size() - 1 - i);
      return holds(Model(u, m), g);
    };
    const Argument yes(f, {}), no(Formula::negation(f), {});
    switch (f.op()) {
      case Op::Atom: return axiom(b, v.at(f.name()) ? yes : no);
      case Op::Top: return make_pj(PJRule::TopI, {b, yes});
      case Op::Bottom: {
        Basics b1 = extend(b, yes);
        return make_pj(PJRule::NotI, {b, no}, {axiom(b1, yes)});
      }
      case Op::Not: {
        const Formula& g = f.lhs();
        if (!truth(g)) return evaluate(b, g, v);  // (¬g, ∅) is (f, ∅)
        Basics b1 = extend(b, Argument(f, {}));
        PJProof bot = not_elim(b1, evaluate(b1, g, v), axiom(b1, Argument(f, {})));
        return make_pj(PJRule::NotI, {b, no}, {bot});
      }
      case Op::And: {
        const bool l = truth(f.lhs()), r = truth(f.rhs());
        if (l && r) return make_pj(PJRule::AndI, {b, yes}, {evaluate(b, f.lhs(), v), evaluate(b, f.rhs(), v)});
        Basics b1 = extend(b, yes);
        const Formula& bad = l ? f.rhs() : f.lhs();
        PJProof part = make_pj(l ? PJRule::AndE2 : PJRule::AndE1, {b1, Argument(bad, {})}, {axiom(b1, yes)});
        PJProof bot = not_elim(b1, part, evaluate(b1, bad, v));
        return make_pj(PJRule::NotI, {b, no}, {bot});
      }
      case Op::Or: {
        if (truth(f.lhs())) return make_pj(PJRule::OrI1, {b, yes}, {evaluate(b, f.lhs(), v)});
        if (truth(f.rhs())) return make_pj(PJRule::OrI2, {b, yes}, {evaluate(b, f.rhs(), v)});
        Basics b1 = extend(b, yes);
        auto branch = [&](const Formula& side) {
          Basics bc = extend(b1, Argument(side, {}));
          return not_elim(bc, axiom(bc, Argument(side, {})), evaluate(bc, side, v));
        };
        PJProof bot = make_pj(PJRule::OrE, {b1, Argument(Formula::bottom(), {})},
                              {axiom(b1, yes), branch(f.lhs()), branch(f.rhs())});
        return make_pj(PJRule::NotI, {b, no}, {bot});
      }
      case Op::Implies: {
        const Formula& g = f.lhs();
        const Formula& h = f.rhs();
        const bool l = truth(g), r = truth(h);
        Basics b1 = extend(b, Argument(g, {}));
        if (r) return make_pj(PJRule::ImpI, {b, yes}, {evaluate(b1, h, v)});
        if (!l) {
          PJProof bot = not_elim(b1, axiom(b1, Argument(g, {})), evaluate(b1, g, v));
          return make_pj(PJRule::ImpI, {b, yes}, {make_pj(PJRule::EFQ, {b1, Argument(h, {})}, {bot})});
        }
        Basics b2 = extend(b, yes);
        PJProof got_h = make_pj(PJRule::ImpE, {b2, Argument(h, {})}, {evaluate(b2, g, v), axiom(b2, yes)});
        PJProof bot = not_elim(b2, got_h, evaluate(b2, h, v));
        return make_pj(PJRule::NotI, {b, no}, {bot});
      }
      case Op::Box: break;
    }
    throw std::invalid_argument("evaluate: formula must be nonmodal");
  }

  // (⊥, X) ⟶ (⊥, X ∪ grounds(a)) for a basic argument a, via ∧I then ∧E1.
  static PJProof widen(const Basics& b, const PJProof& bot, const Argument& a) {
    const auto& g = bot->sequent.goal.grounds;
    if (std::includes(g.begin(), g.end(), a.grounds.begin(), a.grounds.end())) return bot;
    const auto wide = ground_union(g, a.grounds);
    PJProof both = make_pj(PJRule::AndI, {b, Argument(Formula::conjunction(Formula::bottom(), a.head), wide)},
                           {bot, axiom(b, a)});
    return make_pj(PJRule::AndE1, {b, Argument(Formula::bottom(), wide)}, {both});
  }

  // (c, ∪ grounds of used) from the basic arguments used, whose heads
  // classically entail c. Refutes ¬c by cases over every atom involved.
  static PJProof from_heads(const Basics& theta, const Basics& used, const Formula& c) {
    std::vector<Formula> target;
    for (const auto& a : used) target = ground_union(target, a.grounds);
    for (const auto& a : used)
      if (a.head == c && a.grounds == target) return axiom(theta, a);
    if (c.op() == Op::Top && target.empty()) return make_pj(PJRule::TopI, {theta, Argument(c, {})});

    const Argument assume(Formula::negation(c), {});
    const Basics b0 = extend(theta, assume);
    std::set<std::string> as;
    collect_atoms(c, as);
    for (const auto& a : used) collect_atoms(a.head, as);
    std::vector<std::string> atoms(as.begin(), as.end());
    std::map<std::string, bool> v;

    std::function<PJProof(const Basics&, std::size_t)> split = [&](const Basics& b, std::size_t i) -> PJProof {
      if (i == atoms.size()) return leaf(b, used, c, assume, v);
      const Formula x = Formula::atom(atoms[i]);
      const Formula nx = Formula::negation(x);
      v[atoms[i]] = true;
      PJProof yes = split(extend(b, Argument(x, {})), i + 1);
      v[atoms[i]] = false;
      PJProof no = split(extend(b, Argument(nx, {})), i + 1);
      return make_pj(PJRule::OrE,
                     {b, Argument(Formula::bottom(),
                                  ground_union(yes->sequent.goal.grounds, no->sequent.goal.grounds))},
                     {excluded_middle(b, x), yes, no});
    };
    PJProof bot = split(b0, 0);
    for (const auto& a : used) bot = widen(b0, bot, a);
    return make_pj(PJRule::RAA, {theta, Argument(c, target)}, {bot});
  }

 private:
  static PJProof leaf(const Basics& b, const Basics& used, const Formula& c, const Argument& assume,
                      const std::map<std::string, bool>& v) {
    PJProof about_c = evaluate(b, c, v);
    if (about_c->sequent.goal.head == c) return not_elim(b, about_c, axiom(b, assume));
    for (const auto& a : used) {
      PJProof about_h = evaluate(b, a.head, v);
      if (about_h->sequent.goal.head != a.head) return not_elim(b, axiom(b, a), about_h);
    }
    throw std::logic_error("heads do not entail the conclusion");
  }
};

}  // namespace detail

// A derivation of (p, Γ) from the basics using classical or-elimination, read
// off the normal form of a cut-free proof of Γ ⊢ □p under the translated
// theory: one subproof per explanation set, glued by a chain of ∨EC steps.
inline PJExtraction extract_pj_proof(const std::vector<Formula>& gamma, const Formula& p, const Basics& basics_in) {
  const Basics basics = as_basics(basics_in);
  const Argument goal(p, gamma);
  PJExtraction out;
  if (std::binary_search(basics.begin(), basics.end(), goal)) {
    out.status = ExtractionStatus::Extracted;
    out.proof = detail::PJBuilder::axiom(basics, goal);
    return out;
  }
  const ModalTranslation tr = modal_translation({basics, goal});
  // The translated theory drops syntactically repeated rules, so map each rule back to an argument.
  Basics rule_order;
  for (const auto& r : tr.theory.rules())
    for (const auto& a : basics)
      if (basic_rule(a).body == r.body && basic_rule(a).head == r.head) {
        rule_order.push_back(a);
        break;
      }
  auto nf = normal_form(goal.grounds, p, tr.theory);
  if (!nf) {
    out.message = "Γ ⊢ □" + to_string(p) + " is not provable" +
                  (nf.countermodel ? " (countermodel " + nf.countermodel->to_string() + ")" : "");
    return out;
  }
  if (nf.form->parts.empty()) {
    out.status = ExtractionStatus::NoExplanation;
    out.message = "Γ is inconsistent and " + to_string(p) + " has no explanation set";
    return out;
  }
  auto used = [&](const ExplanationSet& s) {
    Basics u;
    for (std::size_t i : s) u.push_back(rule_order.at(i));
    return as_basics(std::move(u));
  };
  std::vector<PJProof> parts;
  std::vector<std::vector<Formula>> grounds;
  std::vector<Formula> disjuncts;
  for (const auto& part : nf.form->parts) {
    parts.push_back(detail::PJBuilder::from_heads(basics, used(part.rules), p));
    grounds.push_back(parts.back()->sequent.goal.grounds);
    disjuncts.push_back(conjoin(grounds.back()));
  }
  const std::size_t n = parts.size();
  if (n == 1 && grounds[0] == goal.grounds) {
    out.status = ExtractionStatus::Extracted;
    out.proof = parts[0];
    return out;
  }
  // Level k turns (p, U_k) and (p, {D_{k+1}}) into (p, {D_k}), D_k = ∨_{i≥k} ∧U_i;
  // the outermost level uses Γ itself.
  auto tail = [&](std::size_t k) { return std::vector<Formula>{disjoin({disjuncts.begin() + k, disjuncts.end()})}; };
  std::function<PJProof(std::size_t)> level = [&](std::size_t k) -> PJProof {
    ClassicalSplit s;
    s.gamma = k == 0 ? goal.grounds : tail(k);
    s.q = grounds[k];
    PJProof right;
    if (k + 1 >= n) {
      s.r = grounds[k];
      right = parts[k];
    } else if (k + 2 == n) {
      s.r = grounds[k + 1];
      right = parts[k + 1];
    } else {
      s.r = tail(k + 1);
      right = level(k + 1);
    }
    s.gamma = as_ground_set(s.gamma);
    return make_pj(PJRule::OrEC, {basics, Argument(p, s.gamma)}, {parts[k], right}, s);
  };
  out.status = ExtractionStatus::Extracted;
  out.proof = level(0);
  return out;
}

// One line per node, premises indented; basic arguments beyond the root's are
// shown as +(…).
inline std::string render_pj_proof(const PJProof& t) {
  std::string out;
  const Basics& root = t->sequent.basics;
  std::function<void(const PJProof&, std::size_t)> walk = [&](const PJProof& p, std::size_t depth) {
    out += std::string(2 * depth, ' ') + to_string(p->rule) + "  ";
    Basics extra;
    std::set_difference(p->sequent.basics.begin(), p->sequent.basics.end(), root.begin(), root.end(),
                        std::back_inserter(extra));
    for (const auto& a : extra) out += "+" + to_string(a) + " ";
    out += "⊢ " + to_string(p->sequent.goal);
    if (p->split) out += "  [" + to_string(p->split->gamma) + " ⊨ ∧" + to_string(p->split->q) + " ∨ ∧" +
                         to_string(p->split->r) + "]";
    out += '\n';
    for (const auto& q : p->premises) walk(q, depth + 1);
  };
  walk(t, 0);
  return out;
}

// Basic arguments DSL:
//   arg: p <- a, b
//   arg: q <-
inline Basics parse_basics(std::string_view text) {
  Basics out;
  for_each_dsl_line(text, [&](const DslLine& l) {
    if (l.key != "arg") throw ParseError(l.line_start, "unknown directive '" + std::string(l.key) + "'", l.number, 1);
    std::size_t sep = l.value.find("<-");
    if (sep == std::string_view::npos)
      throw ParseError(l.value_offset + l.value.size(), "expected '<-'", l.number,
                       l.value_offset + l.value.size() - l.line_start + 1);
    Formula head;
    std::vector<Formula> grounds;
    try {
      head = parse_formula(l.value.substr(0, sep));
    } catch (const ParseError& e) {
      detail::rethrow_at(e, l.value_offset, l.number, l.line_start);
    }
    try {
      grounds = parse_formula_list(l.value.substr(sep + 2));
    } catch (const ParseError& e) {
      detail::rethrow_at(e, l.value_offset + sep + 2, l.number, l.line_start);
    }
    out.emplace_back(head, grounds);
  });
  return as_basics(std::move(out));
}

}  // namespace causal
