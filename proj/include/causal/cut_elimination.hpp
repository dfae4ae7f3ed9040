#pragma once

#include <map>
#include <stdexcept>

#include "annotation.hpp"
#include "checker.hpp"

namespace causal {

namespace detail {

// Reduction of a single multicut between two cut-free proofs. Cases, tried in
// order: an axiom on either side; the cut formula introduced by weakening or
// contraction; the cut formula not principal on the left (permute upward into
// the left proof), then not principal on the right (permute into the right
// proof); finally principal on both sides, where remaining context copies are
// cut first and the single principal copy is reduced per connective. The □R
// against □L case picks the □L premise for the □R rule set and cuts the body
// conjunction, which is nonmodal. Recursion descends on (modal depth of the
// cut formula, its rank, heights of the two proofs).
class CutReducer {
 public:
  // Γ1 ⊢ A^m, Δ1 and Γ2, A^n ⊢ Δ2 give Γ1, Γ2 ⊢ Δ1, Δ2.
  ProofTree reduce(const ProofTree& p1, std::size_t m, const ProofTree& p2, std::size_t n, const Formula& a) {
    const Sequent target = cut_conclusion(p1->conclusion, m, p2->conclusion, n, a);
    const Rule r1 = p1->rule, r2 = p2->rule;
    const auto& pr1 = p1->data.principal;
    const auto& pr2 = p2->data.principal;

    if (r1 == Rule::Ax) return adjust(p2, target);
    if (r2 == Rule::Ax) return adjust(p1, target);
    if (r1 == Rule::RW && *pr1 == a)
      return m == 1 ? adjust(p1->premises[0], target) : reduce(p1->premises[0], m - 1, p2, n, a);
    if (r1 == Rule::RC && *pr1 == a) return reduce(p1->premises[0], m + 1, p2, n, a);
    if (r2 == Rule::LW && *pr2 == a)
      return n == 1 ? adjust(p2->premises[0], target) : reduce(p1, m, p2->premises[0], n - 1, a);
    if (r2 == Rule::LC && *pr2 == a) return reduce(p1, m, p2->premises[0], n + 1, a);

    if (!introduces_right(*p1, a)) return permute_left(p1, m, p2, n, a, target);
    if (!introduces_left(*p2, a)) return permute_right(p1, m, p2, n, a, target);

    ProofTree q1 = p1, q2 = p2;
    if (m > 1) q1 = permute_left(p1, m - 1, p2, n, a, cut_conclusion(p1->conclusion, m - 1, p2->conclusion, n, a));
    if (n > 1) q2 = permute_right(p1, m, p2, n - 1, a, cut_conclusion(p1->conclusion, m, p2->conclusion, n - 1, a));
    return adjust(principal(q1, q2, a), target);
  }

  static Sequent cut_conclusion(const Sequent& s1, std::size_t m, const Sequent& s2, std::size_t n, const Formula& a) {
    Multiset r1 = s1.right, l2 = s2.left;
    if (!remove_n(r1, a, m) || !remove_n(l2, a, n)) throw std::logic_error("cut formula multiplicity mismatch");
    return {plus(s1.left, l2), plus(r1, s2.right)};
  }

  // Contract or weaken p's conclusion into target.
  static ProofTree adjust(const ProofTree& p, const Sequent& target) {
    ProofTree t = p;
    Sequent cur = p->conclusion;
    for (int side = 0; side < 2; ++side) {
      Multiset& have = side ? cur.right : cur.left;
      const Multiset& want = side ? target.right : target.left;
      const Rule contract = side ? Rule::RC : Rule::LC;
      Multiset distinct;
      for (const auto& f : have)
        if (!count_of(distinct, f)) distinct.push_back(f);
      for (const auto& f : distinct) {
        std::size_t c = count_of(have, f), w = count_of(want, f);
        if (c > w && w == 0) throw std::logic_error("cannot drop '" + to_string(f) + "' by contraction");
        for (; c > w; --c) {
          remove_one(have, f);
          t = make_proof(contract, cur, {t}, f);
        }
      }
    }
    for (int side = 0; side < 2; ++side) {
      Multiset& have = side ? cur.right : cur.left;
      const Multiset& want = side ? target.right : target.left;
      const Rule weaken = side ? Rule::RW : Rule::LW;
      for (const auto& f : want)
        while (count_of(have, f) < count_of(want, f)) {
          have.push_back(f);
          t = make_proof(weaken, cur, {t}, f);
        }
    }
    if (!same_sequent(cur, target)) throw std::logic_error("adjust failed to reach " + to_string(target));
    return t->conclusion == target ? t : with_conclusion(t, target);
  }

 private:
  static bool introduces_right(const ProofNode& p, const Formula& a) {
    switch (p.rule) {
      case Rule::TopR: return a.op() == Op::Top;
      case Rule::NotR:
      case Rule::AndR:
      case Rule::OrR:
      case Rule::ImpR:
      case Rule::BoxR: return *p.data.principal == a;
      default: return false;
    }
  }
  static bool introduces_left(const ProofNode& p, const Formula& a) {
    switch (p.rule) {
      case Rule::BotL: return a.op() == Op::Bottom;
      case Rule::NotL:
      case Rule::AndL:
      case Rule::OrL:
      case Rule::ImpL:
      case Rule::BoxL: return *p.data.principal == a;
      default: return false;
    }
  }
  // The □R head premise is closed; every other premise shares the context.
  static bool carries_context(Rule r, std::size_t premise_index) {
    return !(r == Rule::BoxR && premise_index == 1);
  }

  ProofTree permute_left(const ProofTree& p1, std::size_t m, const ProofTree& p2, std::size_t n, const Formula& a,
                         const Sequent& target) {
    std::vector<ProofTree> premises;
    for (std::size_t i = 0; i < p1->premises.size(); ++i)
      premises.push_back(carries_context(p1->rule, i) ? reduce(p1->premises[i], m, p2, n, a) : p1->premises[i]);
    return make_proof(p1->rule, target, std::move(premises), p1->data);
  }

  ProofTree permute_right(const ProofTree& p1, std::size_t m, const ProofTree& p2, std::size_t n, const Formula& a,
                          const Sequent& target) {
    std::vector<ProofTree> premises;
    for (std::size_t i = 0; i < p2->premises.size(); ++i)
      premises.push_back(carries_context(p2->rule, i) ? reduce(p1, m, p2->premises[i], n, a) : p2->premises[i]);
    return make_proof(p2->rule, target, std::move(premises), p2->data);
  }

  // Both proofs end in the logical rule for a, with one copy of a each.
  ProofTree principal(const ProofTree& q1, const ProofTree& q2, const Formula& a) {
    const auto& x = q1->premises;
    const auto& y = q2->premises;
    switch (a.op()) {
      case Op::Not:  // Γ, B ⊢ Δ  and  Γ' ⊢ B, Δ'
        return reduce(y[0], 1, x[0], 1, a.lhs());
      case Op::And: {  // Γ ⊢ B, Δ ; Γ ⊢ C, Δ  and  Γ', B, C ⊢ Δ'
        ProofTree c = reduce(x[1], 1, y[0], 1, a.rhs());
        return reduce(x[0], 1, c, 1, a.lhs());
      }
      case Op::Or: {  // Γ ⊢ B, C, Δ  and  Γ', B ⊢ Δ' ; Γ', C ⊢ Δ'
        ProofTree b = reduce(x[0], 1, y[0], 1, a.lhs());
        return reduce(b, 1, y[1], 1, a.rhs());
      }
      case Op::Implies: {  // Γ, B ⊢ C, Δ  and  Γ' ⊢ B, Δ' ; Γ', C ⊢ Δ'
        ProofTree b = reduce(y[0], 1, x[0], 1, a.lhs());
        return reduce(b, 1, y[1], 1, a.rhs());
      }
      case Op::Box: {
        const auto& fam = q2->data.family;
        auto it = std::find(fam.begin(), fam.end(), q1->data.set);
        if (it == fam.end()) throw std::logic_error("□R rule set is not among the □L explanation sets");
        const ProofTree& chosen = y[static_cast<std::size_t>(it - fam.begin())];
        return reduce(x[0], 1, and_left_chain(chosen, q1->data.set), 1, conjoin(bodies_of(q1->data.set, theory_)));
      }
      default: throw std::logic_error("no principal reduction for " + to_string(a));
    }
  }

  // From Γ', φ1, …, φk ⊢ Δ' derive Γ', φ1 ∧ (… ∧ φk) ⊢ Δ'.
  ProofTree and_left_chain(const ProofTree& p, const ExplanationSet& set) {
    auto bodies = bodies_of(set, theory_);
    Sequent cur = p->conclusion;
    if (bodies.empty()) {
      cur.left.push_back(Formula::top());
      return make_proof(Rule::LW, cur, {p}, Formula::top());
    }
    ProofTree t = p;
    Formula tail = bodies.back();
    for (std::size_t i = bodies.size() - 1; i-- > 0;) {
      Formula joined = Formula::conjunction(bodies[i], tail);
      remove_one(cur.left, bodies[i]);
      remove_one(cur.left, tail);
      cur.left.push_back(joined);
      t = make_proof(Rule::AndL, cur, {t}, joined);
      tail = joined;
    }
    return t;
  }

 public:
  explicit CutReducer(const CausalTheory& t) : theory_(t) {}

 private:
  const CausalTheory& theory_;
};

inline ProofTree eliminate(const ProofTree& t, CutReducer& reducer) {
  if (is_cut_free(t)) return t;
  std::vector<ProofTree> premises;
  for (const auto& p : t->premises) premises.push_back(eliminate(p, reducer));
  if (t->rule != Rule::Multicut) return make_proof(t->rule, t->conclusion, std::move(premises), t->data);
  ProofTree r = reducer.reduce(premises[0], t->data.m, premises[1], t->data.n, *t->data.principal);
  return r->conclusion == t->conclusion ? r : with_conclusion(r, t->conclusion);
}

}  // namespace detail

// Cut-free proof of the same endsequent. Requires a proof accepted by check_proof.
inline ProofTree eliminate_cuts(const ProofTree& t, const CausalTheory& theory) {
  if (auto c = check_proof(t, theory); !c) throw std::invalid_argument("eliminate_cuts: invalid proof: " + c.reason);
  detail::CutReducer reducer(theory);
  return detail::eliminate(t, reducer);
}

}  // namespace causal
