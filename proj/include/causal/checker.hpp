#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "sequent.hpp"

namespace causal {

struct CheckResult {
  bool ok = true;
  std::string reason;
  ProofTree node;  // first offending node
  explicit operator bool() const noexcept { return ok; }
};

namespace detail {

class ProofChecker {
 public:
  explicit ProofChecker(const CausalTheory& t) : sem_(t) {}

  CheckResult check(const ProofTree& t) {
    if (!t) return {false, "null proof node", t};
    if (!seen_.insert(t.get()).second) return {};
    if (auto why = local(*t); !why.empty()) return {false, why, t};
    for (const auto& p : t->premises)
      if (auto r = check(p); !r) return r;
    return {};
  }

 private:
  std::string over_universe(const Sequent& s) const {
    std::set<std::string> atoms;
    for (const auto& f : s.left) collect_atoms(f, atoms);
    for (const auto& f : s.right) collect_atoms(f, atoms);
    for (const auto& a : atoms)
      if (!sem_.universe().contains(a)) return "atom '" + a + "' is not in the theory's universe";
    return {};
  }

  static std::string expect(const Sequent& got, const Sequent& want, const char* which) {
    if (same_sequent(got, want)) return {};
    return std::string(which) + " should be '" + to_string(want) + "' but is '" + to_string(got) + "'";
  }

  const std::vector<ExplanationSet>& family(const Formula& p) {
    auto it = families_.find(p);
    if (it == families_.end()) it = families_.emplace(p, explanation_sets(p, sem_)).first;
    return it->second;
  }

  std::string local(const ProofNode& n) {
    const Sequent& c = n.conclusion;
    if (auto e = over_universe(c); !e.empty()) return e;
    const auto& ps = n.premises;
    auto arity = [&](std::size_t k) -> std::string {
      if (ps.size() == k) return {};
      return std::string(to_string(n.rule)) + " needs " + std::to_string(k) + " premise(s), has " +
             std::to_string(ps.size());
    };
    const auto& pr = n.data.principal;
    auto need_principal = [&](Op op, bool on_left) -> std::string {
      if (!pr) return "missing principal formula";
      if (op != Op::Atom && pr->op() != op) return "principal formula has the wrong connective";
      if (count_of(on_left ? c.left : c.right, *pr) == 0)
        return "principal formula not in the " + std::string(on_left ? "antecedent" : "succedent");
      return {};
    };
    auto premise = [&](std::size_t i) -> const Sequent& { return ps[i]->conclusion; };
    auto minus = [](Multiset xs, const Formula& f) {
      remove_one(xs, f);
      return xs;
    };
    std::string e;
    switch (n.rule) {
      case Rule::Ax:
        if ((e = arity(0)).size()) return e;
        if (c.left.size() != 1 || c.right.size() != 1 || !(c.left[0] == c.right[0]))
          return "axiom must have the form A ⊢ A";
        return {};
      case Rule::BotL:
        if ((e = arity(0)).size()) return e;
        if (c.left.size() != 1 || c.left[0].op() != Op::Bottom || !c.right.empty())
          return "BotL must have the form false ⊢";
        return {};
      case Rule::TopR:
        if ((e = arity(0)).size()) return e;
        if (!c.left.empty() || c.right.size() != 1 || c.right[0].op() != Op::Top)
          return "TopR must have the form ⊢ true";
        return {};
      case Rule::LW:
      case Rule::LC:
      case Rule::RW:
      case Rule::RC: {
        if ((e = arity(1)).size()) return e;
        const bool left = n.rule == Rule::LW || n.rule == Rule::LC;
        if ((e = need_principal(Op::Atom, left)).size()) return e;
        Sequent want = c;
        Multiset& side = left ? want.left : want.right;
        if (n.rule == Rule::LW || n.rule == Rule::RW)
          remove_one(side, *pr);
        else
          side.push_back(*pr);
        return expect(premise(0), want, "premise");
      }
      case Rule::NotL:
        if ((e = arity(1)).size() || (e = need_principal(Op::Not, true)).size()) return e;
        return expect(premise(0), {minus(c.left, *pr), plus(c.right, {pr->lhs()})}, "premise");
      case Rule::NotR:
        if ((e = arity(1)).size() || (e = need_principal(Op::Not, false)).size()) return e;
        return expect(premise(0), {plus(c.left, {pr->lhs()}), minus(c.right, *pr)}, "premise");
      case Rule::AndL:
        if ((e = arity(1)).size() || (e = need_principal(Op::And, true)).size()) return e;
        return expect(premise(0), {plus(minus(c.left, *pr), {pr->lhs(), pr->rhs()}), c.right}, "premise");
      case Rule::OrR:
        if ((e = arity(1)).size() || (e = need_principal(Op::Or, false)).size()) return e;
        return expect(premise(0), {c.left, plus(minus(c.right, *pr), {pr->lhs(), pr->rhs()})}, "premise");
      case Rule::ImpR:
        if ((e = arity(1)).size() || (e = need_principal(Op::Implies, false)).size()) return e;
        return expect(premise(0), {plus(c.left, {pr->lhs()}), plus(minus(c.right, *pr), {pr->rhs()})},
                      "premise");
      case Rule::AndR:
        if ((e = arity(2)).size() || (e = need_principal(Op::And, false)).size()) return e;
        if ((e = expect(premise(0), {c.left, plus(minus(c.right, *pr), {pr->lhs()})}, "left premise")).size())
          return e;
        return expect(premise(1), {c.left, plus(minus(c.right, *pr), {pr->rhs()})}, "right premise");
      case Rule::OrL:
        if ((e = arity(2)).size() || (e = need_principal(Op::Or, true)).size()) return e;
        if ((e = expect(premise(0), {plus(minus(c.left, *pr), {pr->lhs()}), c.right}, "left premise")).size())
          return e;
        return expect(premise(1), {plus(minus(c.left, *pr), {pr->rhs()}), c.right}, "right premise");
      case Rule::ImpL:
        if ((e = arity(2)).size() || (e = need_principal(Op::Implies, true)).size()) return e;
        if ((e = expect(premise(0), {minus(c.left, *pr), plus(c.right, {pr->lhs()})}, "left premise")).size())
          return e;
        return expect(premise(1), {plus(minus(c.left, *pr), {pr->rhs()}), c.right}, "right premise");
      case Rule::BoxR: {
        if ((e = arity(2)).size() || (e = need_principal(Op::Box, false)).size()) return e;
        const auto& s = n.data.set;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s[i] >= sem_.theory().size()) return "BoxR names rule " + std::to_string(s[i]) + " which does not exist";
          if (i && s[i] <= s[i - 1]) return "BoxR rule set must be strictly ascending";
        }
        const auto& t = sem_.theory();
        if ((e = expect(premise(0), {c.left, plus(minus(c.right, *pr), {conjoin(bodies_of(s, t))})},
                        "body premise")).size())
          return e;
        return expect(premise(1), {heads_of(s, t), {pr->lhs()}}, "head premise");
      }
      case Rule::BoxL: {
        if ((e = need_principal(Op::Box, true)).size()) return e;
        const auto& fam = family(pr->lhs());
        if (n.data.family != fam) return "BoxL family is not the canonical list of explanation sets";
        if ((e = arity(fam.size())).size()) return e;
        const auto& t = sem_.theory();
        for (std::size_t j = 0; j < fam.size(); ++j)
          if ((e = expect(premise(j), {plus(minus(c.left, *pr), bodies_of(fam[j], t)), c.right},
                          "family premise")).size())
            return e;
        return {};
      }
      case Rule::Multicut: {
        if ((e = arity(2)).size()) return e;
        if (!pr) return "missing cut formula";
        if (n.data.m == 0 || n.data.n == 0) return "multicut multiplicities must be positive";
        Multiset r1 = premise(0).right, l2 = premise(1).left;
        if (!remove_n(r1, *pr, n.data.m)) return "left premise lacks m copies of the cut formula";
        if (!remove_n(l2, *pr, n.data.n)) return "right premise lacks n copies of the cut formula";
        return expect(c, {plus(premise(0).left, l2), plus(r1, premise(1).right)}, "conclusion");
      }
    }
    return "unknown rule";
  }

  Semantics sem_;
  std::unordered_set<const ProofNode*> seen_;
  std::map<Formula, std::vector<ExplanationSet>> families_;
};

}  // namespace detail

inline CheckResult check_proof(const ProofTree& t, const CausalTheory& theory) {
  return detail::ProofChecker(theory).check(t);
}

}  // namespace causal
