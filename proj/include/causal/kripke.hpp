#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semantics.hpp"

namespace causal {

using World = std::size_t;

// Finite Kripke model with explicit worlds, relation and valuation.
struct KripkeModel {
  Universe universe;
  std::vector<Model> valuation;                  // one per world
  std::set<std::pair<World, World>> relation;

  std::size_t size() const noexcept { return valuation.size(); }

  std::vector<World> successors(World w) const {
    std::vector<World> out;
    for (auto it = relation.lower_bound({w, 0}); it != relation.end() && it->first == w; ++it)
      out.push_back(it->second);
    return out;
  }

  void validate() const {
    for (const auto& v : valuation)
      if (!(v.universe() == universe)) throw std::invalid_argument("valuation over a different universe");
    for (const auto& [a, b] : relation)
      if (a >= size() || b >= size()) throw std::invalid_argument("relation endpoint is not a world");
  }

  // Worlds forcing f.
  std::vector<bool> forces(const Formula& f) const {
    std::vector<bool> out(size());
    switch (f.op()) {
      case Op::Box: {
        auto inner = forces(f.lhs());
        for (World w = 0; w < size(); ++w) {
          bool all = true;
          for (World v : successors(w)) all = all && inner[v];
          out[w] = all;
        }
        return out;
      }
      case Op::Not: {
        auto a = forces(f.lhs());
        for (World w = 0; w < size(); ++w) out[w] = !a[w];
        return out;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        auto a = forces(f.lhs()), b = forces(f.rhs());
        for (World w = 0; w < size(); ++w)
          out[w] = f.op() == Op::And ? (a[w] && b[w]) : f.op() == Op::Or ? (a[w] || b[w]) : (!a[w] || b[w]);
        return out;
      }
      default:
        for (World w = 0; w < size(); ++w) out[w] = holds(valuation[w], f);
        return out;
    }
  }
};

inline KripkeModel canonical_model(const CausalTheory& t, std::size_t max_atoms = kDefaultMaxAtoms) {
  KripkeModel k;
  k.universe = t.universe();
  k.valuation = enumerate_models(t.universe(), max_atoms);
  Semantics sem(t, max_atoms);
  for (World w = 0; w < k.size(); ++w)
    sem.closure(static_cast<ModelIndex>(w)).for_each([&](ModelIndex v) { k.relation.emplace(w, v); });
  return k;
}

inline ModelSet semantic_value(const Formula& f, const CausalTheory& t) { return Semantics(t).value(f); }

inline bool modal_entails_semantic(const std::vector<Formula>& gamma, const std::vector<Formula>& delta,
                                   const CausalTheory& t) {
  return Semantics(t).entails(gamma, delta);
}

// Rule indices into the theory, ascending.
using ExplanationSet = std::vector<std::size_t>;

inline std::vector<Formula> bodies_of(const ExplanationSet& s, const CausalTheory& t) {
  std::vector<Formula> out;
  for (auto i : s) out.push_back(t[i].body);
  return out;
}

inline std::vector<Formula> heads_of(const ExplanationSet& s, const CausalTheory& t) {
  std::vector<Formula> out;
  for (auto i : s) out.push_back(t[i].head);
  return out;
}

inline ModelSet heads_value(const ExplanationSet& s, const Semantics& sem) {
  ModelSet v = ModelSet::all(sem.atoms());
  for (auto i : s) v &= sem.head(i);
  return v;
}

inline ModelSet bodies_value(const ExplanationSet& s, const Semantics& sem) {
  ModelSet v = ModelSet::all(sem.atoms());
  for (auto i : s) v &= sem.body(i);
  return v;
}

inline ExplanationSet subset_from_mask(std::uint64_t mask, std::size_t rules) {
  ExplanationSet s;
  for (std::size_t i = 0; i < rules; ++i)
    if (mask >> i & 1U) s.push_back(i);
  return s;
}

// Every rule subset whose heads jointly entail f, in ascending bitmask order
// (bit i = rule i). The target may be modal; its extension is taken in the canonical model.
inline std::vector<ExplanationSet> explanation_sets(const Formula& f, const Semantics& sem) {
  const std::size_t r = sem.theory().size();
  if (r > 24) throw CapacityError("explanation sets limited to 24 rules");
  const ModelSet target = sem.value(f);
  std::vector<ExplanationSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    ExplanationSet s = subset_from_mask(mask, r);
    if (heads_value(s, sem).subset_of(target)) out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<ExplanationSet> explanation_sets(const Formula& f, const CausalTheory& t) {
  return explanation_sets(f, Semantics(t));
}

inline bool check_causal_axioms(const KripkeModel& k, const CausalTheory& t) {
  k.validate();
  for (const auto& r : t.rules()) {
    auto body = k.forces(r.body);
    auto boxed = k.forces(Formula::box(r.head));
    for (World w = 0; w < k.size(); ++w)
      if (body[w] && !boxed[w]) return false;
  }
  return true;
}

inline Model eta_project(const KripkeModel& k, World w, const CausalTheory& t) {
  if (w >= k.size()) throw std::out_of_range("no such world");
  if (!check_causal_axioms(k, t))
    throw std::invalid_argument("eta_project: model does not satisfy the causal axioms of the theory");
  return k.valuation[w];
}

// m satisfies □f → f and f → □f for all f exactly when its only successor is itself.
inline bool is_explained_via_modal(const Model& m, const CausalTheory& t) {
  const KripkeModel k = canonical_model(t);
  auto succ = k.successors(m.index());
  return succ.size() == 1 && succ.front() == m.index();
}

}  // namespace causal
