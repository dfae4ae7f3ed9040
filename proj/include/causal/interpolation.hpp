#pragma once

#include <optional>
#include <stdexcept>

#include "prover.hpp"

namespace causal {

struct Interpolant {
  Formula a;  // conjunction of rule bodies
  Formula b;  // conjunction of the matching heads
  ExplanationSet rules;
};

namespace detail {

class InterpolantCollector {
 public:
  InterpolantCollector(const CausalTheory& t, Formula boxp) : sem_(t), boxp_(std::move(boxp)) {}

  std::vector<Interpolant> run(const ProofTree& t) {
    collect(t, count_of(t->conclusion.right, boxp_));
    return std::move(out_);
  }

 private:
  void add(const ExplanationSet& s) {
    for (const auto& i : out_)
      if (i.rules == s) return;
    const auto& th = sem_.theory();
    out_.push_back({conjoin(bodies_of(s, th)), conjoin(heads_of(s, th)), s});
  }

  // d = number of tracked □p occurrences in the succedent of t.
  void collect(const ProofTree& t, std::size_t d) {
    if (d == 0) return;
    const auto& pr = t->data.principal;
    const bool on_boxp = pr && *pr == boxp_;
    switch (t->rule) {
      case Rule::Multicut: throw std::invalid_argument("interpolate: proof must be cut-free");
      case Rule::BoxR:
        if (on_boxp) {
          add(t->data.set);
          collect(t->premises[0], d - 1);
        } else {
          collect(t->premises[0], d);
        }
        return;
      case Rule::Ax:
        // □p ⊢ □p: □p is the disjunction of its body conjunctions.
        for (const auto& s : covering_explanation_sets(explanation_sets(boxp_.lhs(), sem_), sem_)) add(s);
        return;
      case Rule::RW: collect(t->premises[0], on_boxp ? d - 1 : d); return;
      case Rule::RC: collect(t->premises[0], on_boxp ? d + 1 : d); return;
      default:
        for (const auto& p : t->premises) collect(p, d);
    }
  }

  Semantics sem_;
  Formula boxp_;
  std::vector<Interpolant> out_;
};

}  // namespace detail

// Interpolants for the occurrences of □p in the succedent of a cut-free
// proof of Γ ⊢ □p, Δ: Γ ⊢ {a_i}, Δ and each a_i ⊢ □b_i, b_i ⊢ p.
inline std::vector<Interpolant> interpolate(const ProofTree& t, const Formula& boxp, const CausalTheory& theory) {
  if (boxp.op() != Op::Box || !count_of(t->conclusion.right, boxp))
    throw std::invalid_argument("interpolate: conclusion has no '" + to_string(boxp) + "' on the right");
  if (!is_cut_free(t)) throw std::invalid_argument("interpolate: proof must be cut-free");
  return detail::InterpolantCollector(theory, boxp).run(t);
}

inline std::vector<Interpolant> interpolate(const ProofTree& t, const CausalTheory& theory) {
  for (const auto& f : t->conclusion.right)
    if (f.op() == Op::Box) return interpolate(t, f, theory);
  throw std::invalid_argument("interpolate: conclusion has no boxed formula on the right");
}

struct NormalForm {
  std::vector<Formula> gamma;  // Γ' ⊆ Γ
  Formula a, b;
  std::vector<Interpolant> parts;
};

struct NormalFormResult {
  std::optional<NormalForm> form;
  std::optional<Model> countermodel;
  explicit operator bool() const noexcept { return form.has_value(); }
};

// Γ' ⊢ a, a ⊢ □b, b ⊢ p from a cut-free proof of Γ ⊢ □p. Interpolants Γ does
// not need are dropped first, then members of Γ the disjunction does not need.
inline NormalFormResult normal_form(const std::vector<Formula>& gamma, const Formula& p, const CausalTheory& theory) {
  for (const auto& g : gamma)
    if (g.is_modal()) throw std::invalid_argument("normal_form: Γ must be nonmodal");
  const Formula boxp = Formula::box(p);
  auto outcome = prove_cut_free({gamma, {boxp}}, theory);
  if (outcome.status == SearchStatus::Exhausted) throw SearchExhausted(outcome.message);
  if (!outcome) return {std::nullopt, outcome.countermodel};

  Valuator val(theory.universe());
  auto parts = interpolate(outcome.proof, boxp, theory);
  auto as = [](const std::vector<Interpolant>& xs) {
    std::vector<Formula> out;
    for (const auto& x : xs) out.push_back(x.a);
    return out;
  };
  const ModelSet g = val.eval_all(gamma);
  for (std::size_t i = 0; i < parts.size();) {
    auto trial = parts;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (g.subset_of(val.eval_any(as(trial))))
      parts = std::move(trial);
    else
      ++i;
  }
  NormalForm nf;
  nf.gamma = gamma;
  const ModelSet target = val.eval_any(as(parts));
  for (std::size_t i = 0; i < nf.gamma.size();) {
    auto trial = nf.gamma;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (val.eval_all(trial).subset_of(target))
      nf.gamma = std::move(trial);
    else
      ++i;
  }
  std::vector<Formula> bs;
  for (const auto& x : parts) bs.push_back(x.b);
  nf.a = disjoin(as(parts));
  nf.b = disjoin(bs);
  nf.parts = std::move(parts);
  return {std::move(nf), std::nullopt};
}

}  // namespace causal
