#pragma once

#include <algorithm>
#include <vector>

#include "sequent.hpp"

namespace causal {

// Box formulas have rank 0 whatever is underneath.
inline std::size_t formula_rank(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bottom:
    case Op::Box: return 0;
    case Op::Not: return formula_rank(f.lhs()) + 1;
    default: return std::max(formula_rank(f.lhs()), formula_rank(f.rhs())) + 1;
  }
}

struct Annotation {
  std::size_t alpha = 0;  // finitary depth since the last □L
  std::size_t zeta = 0;   // nesting of □L nodes that sit below cuts
  std::size_t rho = 0;    // strict bound on cut ranks
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AnnotatedProof {
  ProofTree node;
  Annotation annotation;
  std::vector<AnnotatedProof> premises;
};

// Least annotation per node, preferring small ζ, then ρ, then α. Premises
// with a smaller ζ than the maximum can be lifted to any α and ρ, so only the
// premises at the maximal ζ constrain the node.
inline AnnotatedProof annotate(const ProofTree& t) {
  AnnotatedProof out{t, {}, {}};
  for (const auto& p : t->premises) out.premises.push_back(annotate(p));
  Annotation& a = out.annotation;
  switch (t->rule) {
    case Rule::Ax:
    case Rule::BotL:
    case Rule::TopR: return out;
    case Rule::BoxL: {
      std::size_t top = 0;
      bool clean = true;
      for (const auto& p : out.premises) {
        top = std::max(top, p.annotation.zeta);
        clean = clean && p.annotation.zeta == 0 && p.annotation.rho == 0;
      }
      if (!clean) a.zeta = top + 1;
      return out;
    }
    default: {
      for (const auto& p : out.premises) a.zeta = std::max(a.zeta, p.annotation.zeta);
      std::size_t alpha = 0;
      for (const auto& p : out.premises)
        if (p.annotation.zeta == a.zeta) {
          a.rho = std::max(a.rho, p.annotation.rho);
          alpha = std::max(alpha, p.annotation.alpha);
        }
      a.alpha = alpha + 1;
      if (t->rule == Rule::Multicut && t->data.principal)
        a.rho = std::max(a.rho, formula_rank(*t->data.principal) + 1);
      return out;
    }
  }
}

}  // namespace causal
