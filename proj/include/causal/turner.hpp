#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kripke.hpp"
#include "parser.hpp"

namespace causal {

// S5 formulas reuse Formula: the Box node stands for the operator C.
inline constexpr std::size_t kTurnerMaxAtoms = 3;

inline const PrintStyle kS5Style{"C", true};

inline Formula parse_s5_formula(std::string_view text, const Universe* u = nullptr) {
  ParseOptions opts;
  opts.universe = u;
  opts.modality = "C";
  return parse_formula(text, opts);
}

// Worlds are distinct valuations; cls[i] names the equivalence class of world i.
struct S5Model {
  Universe universe;
  std::vector<ModelIndex> worlds;
  std::vector<std::size_t> cls;

  std::size_t size() const noexcept { return worlds.size(); }

  void validate() const {
    if (worlds.empty()) throw std::invalid_argument("S5 model needs at least one world");
    if (cls.size() != worlds.size()) throw std::invalid_argument("every world needs a class");
    for (std::size_t i = 0; i < worlds.size(); ++i)
      for (std::size_t j = i + 1; j < worlds.size(); ++j)
        if (worlds[i] == worlds[j]) throw std::invalid_argument("duplicate world valuation");
  }
};

inline bool s5_holds(const S5Model& k, std::size_t w, const Formula& f) {
  if (w >= k.size()) throw std::out_of_range("s5_holds: no such world");
  switch (f.op()) {
    case Op::Atom: {
      auto i = k.universe.index_of(f.name());
      if (!i) throw std::invalid_argument("atom '" + f.name() + "' is not in the universe");
      return index_value(k.worlds[w], *i, k.universe.size());
    }
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Not: return !s5_holds(k, w, f.lhs());
    case Op::And: return s5_holds(k, w, f.lhs()) && s5_holds(k, w, f.rhs());
    case Op::Or: return s5_holds(k, w, f.lhs()) || s5_holds(k, w, f.rhs());
    case Op::Implies: return !s5_holds(k, w, f.lhs()) || s5_holds(k, w, f.rhs());
    case Op::Box:
      for (std::size_t v = 0; v < k.size(); ++v)
        if (k.cls[v] == k.cls[w] && !s5_holds(k, v, f.lhs())) return false;
      return true;
  }
  return false;
}

namespace detail {
// Forcing at w only sees w's class, so one class over the given worlds is enough.
inline bool forced_at_first(const Universe& u, std::vector<ModelIndex> worlds, const std::vector<Formula>& t) {
  S5Model k{u, std::move(worlds), {}};
  k.cls.assign(k.worlds.size(), 0);
  for (const auto& f : t)
    if (!s5_holds(k, 0, f)) return false;
  return true;
}
}  // namespace detail

// A valuation is explained when T holds in the one-world model on it and no
// larger class around it (over other valuations) still forces T there.
inline std::vector<Model> turner_explained_models(const std::vector<Formula>& t, const Universe& u) {
  check_capacity(u.size(), kTurnerMaxAtoms);
  for (const auto& f : t) require_in_universe(f, u, "S5 theory");
  const std::size_t n = std::size_t{1} << u.size();
  std::vector<Model> out;
  for (ModelIndex w = 0; w < n; ++w) {
    if (!detail::forced_at_first(u, {w}, t)) continue;
    bool refuted = false;
    // Every set of other valuations, as a bitmask over the valuation space minus w.
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) && !refuted; ++mask) {
      if (mask >> w & 1U) continue;
      std::vector<ModelIndex> worlds{w};
      for (ModelIndex v = 0; v < n; ++v)
        if (mask >> v & 1U) worlds.push_back(v);
      refuted = detail::forced_at_first(u, std::move(worlds), t);
    }
    if (!refuted) out.emplace_back(u, w);
  }
  return out;
}

inline Consequence turner_consequence(const std::vector<Formula>& t, const Formula& f, const Universe& u) {
  if (f.is_modal()) throw std::invalid_argument("turner_consequence: query must be nonmodal");
  auto models = turner_explained_models(t, u);
  Consequence c{true, models.empty()};
  for (const auto& m : models) c.holds = c.holds && holds(m, f);
  return c;
}

struct TurnerWitness {
  std::vector<Formula> t1, t2;
  bool t1_explains_p = false;
  bool t2_explains_p = false;
  std::vector<Model> t1_models, t2_models;
  // Causal-theory side: box1 from {p ▷ p}, box2 from {p ▷ p, ¬p ▷ ¬p}.
  bool box1_p_is_p = false;
  bool box1_not_p_is_empty = false;
  bool box2_p_is_p = false;
  bool box2_not_p_is_not_p = false;
  // Semantic values of {□p ↔ p, □¬p ↔ ¬p} under each theory.
  std::vector<ModelSet> gamma1, gamma2;
  bool gamma1_is_top_and_p = false;
  bool gamma2_is_top = false;
};

inline TurnerWitness nonmonotonicity_witness() {
  const Universe u({"p"});
  const Formula p = Formula::atom("p"), np = Formula::negation(p);
  TurnerWitness w;
  w.t1 = {Formula::implication(p, Formula::box(p))};
  w.t2 = {w.t1[0], Formula::implication(np, Formula::box(np))};
  w.t1_models = turner_explained_models(w.t1, u);
  w.t2_models = turner_explained_models(w.t2, u);
  auto t1 = turner_consequence(w.t1, p, u), t2 = turner_consequence(w.t2, p, u);
  w.t1_explains_p = t1.holds && !t1.vacuous;
  w.t2_explains_p = t2.holds && !t2.vacuous;

  const CausalTheory th1(u, {{p, p}}), th2(u, {{p, p}, {np, np}});
  const Semantics s1(th1), s2(th2);
  const ModelSet vp = s1.value(p), vnp = s1.value(np), all = ModelSet::all(1);
  w.box1_p_is_p = s1.value(Formula::box(p)) == vp;
  w.box1_not_p_is_empty = s1.value(Formula::box(np)).empty();
  w.box2_p_is_p = s2.value(Formula::box(p)) == vp;
  w.box2_not_p_is_not_p = s2.value(Formula::box(np)) == vnp;
  for (const auto* s : {&s1, &s2}) {
    auto& gamma = s == &s1 ? w.gamma1 : w.gamma2;
    gamma = {s->value(iff(Formula::box(p), p)), s->value(iff(Formula::box(np), np))};
  }
  auto same_up_to_order = [](std::vector<ModelSet> a, std::vector<ModelSet> b) {
    auto has_all = [](const std::vector<ModelSet>& xs, const std::vector<ModelSet>& ys) {
      return std::all_of(xs.begin(), xs.end(),
                         [&](const ModelSet& x) { return std::find(ys.begin(), ys.end(), x) != ys.end(); });
    };
    return has_all(a, b) && has_all(b, a);
  };
  w.gamma1_is_top_and_p = same_up_to_order(w.gamma1, {all, vp});
  w.gamma2_is_top = same_up_to_order(w.gamma2, {all});
  return w;
}

// S5 theory DSL:
//   atoms: p
//   axiom: p -> C p
struct S5Theory {
  Universe universe;
  std::vector<Formula> axioms;
};

inline S5Theory parse_s5_theory(std::string_view text) {
  std::vector<std::string> atoms;
  std::vector<DslLine> pending;
  for_each_dsl_line(text, [&](const DslLine& l) {
    if (l.key == "atoms") {
      for (auto& a : split_words(l.value))
        if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(a);
    } else if (l.key == "axiom") {
      pending.push_back(l);
    } else {
      throw ParseError(l.line_start, "unknown directive '" + std::string(l.key) + "'", l.number, 1);
    }
  });
  S5Theory t{Universe(atoms), {}};
  for (const auto& l : pending) {
    try {
      t.axioms.push_back(parse_s5_formula(l.value, &t.universe));
    } catch (const ParseError& e) {
      detail::rethrow_at(e, l.value_offset, l.number, l.line_start);
    }
  }
  return t;
}

}  // namespace causal
