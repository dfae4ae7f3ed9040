#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "formula.hpp"
#include "model.hpp"
#include "theory.hpp"

namespace causal {

// Classical truth at a single model. Modal formulas need a theory; see Semantics.
inline bool holds(const Model& m, const Formula& f) {
  switch (f.op()) {
    case Op::Atom: return m[f.name()];
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Not: return !holds(m, f.lhs());
    case Op::And: return holds(m, f.lhs()) && holds(m, f.rhs());
    case Op::Or: return holds(m, f.lhs()) || holds(m, f.rhs());
    case Op::Implies: return !holds(m, f.lhs()) || holds(m, f.rhs());
    case Op::Box: break;
  }
  throw std::invalid_argument("holds: modal formula needs a causal theory: " + to_string(f));
}

// Evaluates nonmodal formulas to model sets over a fixed universe.
class Valuator {
 public:
  explicit Valuator(Universe u, std::size_t max_atoms = kDefaultMaxAtoms) : universe_(std::move(u)) {
    const std::size_t n = universe_.size();
    check_capacity(n, max_atoms);
    atom_sets_.assign(n, ModelSet(n));
    const ModelIndex count = ModelIndex{1} << n;
    for (std::size_t k = 0; k < n; ++k)
      for (ModelIndex m = 0; m < count; ++m)
        if (index_value(m, k, n)) atom_sets_[k].insert(m);
  }

  const Universe& universe() const noexcept { return universe_; }
  std::size_t atoms() const noexcept { return universe_.size(); }

  ModelSet eval(const Formula& f) const {
    const std::size_t n = universe_.size();
    switch (f.op()) {
      case Op::Atom: {
        auto i = universe_.index_of(f.name());
        if (!i) throw std::invalid_argument("atom '" + f.name() + "' not in universe");
        return atom_sets_[*i];
      }
      case Op::Top: return ModelSet::all(n);
      case Op::Bottom: return ModelSet::none(n);
      case Op::Not: return ~eval(f.lhs());
      case Op::And: return eval(f.lhs()) & eval(f.rhs());
      case Op::Or: return eval(f.lhs()) | eval(f.rhs());
      case Op::Implies: return ~eval(f.lhs()) | eval(f.rhs());
      case Op::Box: break;
    }
    throw std::invalid_argument("classical evaluation of modal formula " + to_string(f));
  }

  ModelSet eval_all(const std::vector<Formula>& fs) const {
    ModelSet s = ModelSet::all(atoms());
    for (const auto& f : fs) s &= eval(f);
    return s;
  }
  ModelSet eval_any(const std::vector<Formula>& fs) const {
    ModelSet s = ModelSet::none(atoms());
    for (const auto& f : fs) s |= eval(f);
    return s;
  }

 private:
  Universe universe_;
  std::vector<ModelSet> atom_sets_;
};

inline Universe universe_of(const std::vector<Formula>& a, const std::vector<Formula>& b = {}) {
  std::set<std::string> atoms;
  for (const auto& f : a) collect_atoms(f, atoms);
  for (const auto& f : b) collect_atoms(f, atoms);
  return Universe(std::vector<std::string>(atoms.begin(), atoms.end()));
}

// Γ ⊨ Δ classically: every model of all of Γ satisfies some member of Δ.
inline bool classical_entails(const std::vector<Formula>& gamma, const std::vector<Formula>& delta,
                              const Universe& u) {
  Valuator v(u);
  return v.eval_all(gamma).subset_of(v.eval_any(delta));
}

inline bool classical_entails(const std::vector<Formula>& gamma, const std::vector<Formula>& delta) {
  return classical_entails(gamma, delta, universe_of(gamma, delta));
}

// Semantic view of a causal theory: rule extensions, the causal closure of each
// model, and modal formulas evaluated in the canonical model. Caches are
// internal and unsynchronised; use one instance per thread.
class Semantics {
 public:
  explicit Semantics(CausalTheory theory, std::size_t max_atoms = kDefaultMaxAtoms)
      : theory_(std::move(theory)), valuator_(theory_.universe(), max_atoms) {
    for (const auto& r : theory_.rules()) {
      bodies_.push_back(valuator_.eval(r.body));
      heads_.push_back(valuator_.eval(r.head));
    }
  }

  const CausalTheory& theory() const noexcept { return theory_; }
  const Universe& universe() const noexcept { return theory_.universe(); }
  const Valuator& valuator() const noexcept { return valuator_; }
  std::size_t atoms() const noexcept { return universe().size(); }
  std::size_t model_count() const noexcept { return std::size_t{1} << atoms(); }
  const ModelSet& body(std::size_t i) const { return bodies_.at(i); }
  const ModelSet& head(std::size_t i) const { return heads_.at(i); }

  // Rules whose body holds at m.
  std::vector<std::size_t> fired(ModelIndex m) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bodies_.size(); ++i)
      if (bodies_[i].contains(m)) out.push_back(i);
    return out;
  }

  // Models of the causal closure: the conjunction of the heads of fired rules.
  const ModelSet& closure(ModelIndex m) const { return group(m).heads; }

  bool explained(ModelIndex m) const {
    const Group& g = group(m);
    return g.count == 1 && g.heads.contains(m);
  }

  ModelSet explained_models() const {
    ModelSet out(atoms());
    for (ModelIndex m = 0; m < model_count(); ++m)
      if (explained(m)) out.insert(m);
    return out;
  }

  // Extension of a possibly modal formula; □f holds at m iff every successor
  // of m satisfies f.
  ModelSet value(const Formula& f) const {
    if (!f.is_modal()) return valuator_.eval(f);
    if (auto it = box_cache_.find(f); it != box_cache_.end()) return it->second;
    ModelSet out(atoms());
    switch (f.op()) {
      case Op::Not: out = ~value(f.lhs()); break;
      case Op::And: out = value(f.lhs()) & value(f.rhs()); break;
      case Op::Or: out = value(f.lhs()) | value(f.rhs()); break;
      case Op::Implies: out = ~value(f.lhs()) | value(f.rhs()); break;
      case Op::Box: {
        const ModelSet inner = value(f.lhs());
        for (ModelIndex m = 0; m < model_count(); ++m)
          if (closure(m).subset_of(inner)) out.insert(m);
        break;
      }
      default: break;
    }
    box_cache_.emplace(f, out);
    return out;
  }

  ModelSet value_all(const std::vector<Formula>& fs) const {
    ModelSet s = ModelSet::all(atoms());
    for (const auto& f : fs) s &= value(f);
    return s;
  }
  ModelSet value_any(const std::vector<Formula>& fs) const {
    ModelSet s = ModelSet::none(atoms());
    for (const auto& f : fs) s |= value(f);
    return s;
  }

  bool entails(const std::vector<Formula>& gamma, const std::vector<Formula>& delta) const {
    return value_all(gamma).subset_of(value_any(delta));
  }

 private:
  struct Group {
    ModelSet heads;
    std::size_t count = 0;
  };

  const Group& group(ModelIndex m) const {
    std::string key((bodies_.size() + 7) / 8, '\0');
    for (std::size_t i = 0; i < bodies_.size(); ++i)
      if (bodies_[i].contains(m)) key[i / 8] = static_cast<char>(key[i / 8] | (1 << (i % 8)));
    auto it = groups_.find(key);
    if (it != groups_.end()) return it->second;
    Group g{ModelSet::all(atoms()), 0};
    for (std::size_t i = 0; i < bodies_.size(); ++i)
      if (bodies_[i].contains(m)) g.heads &= heads_[i];
    g.count = g.heads.count();
    return groups_.emplace(std::move(key), std::move(g)).first->second;
  }

  CausalTheory theory_;
  Valuator valuator_;
  std::vector<ModelSet> bodies_, heads_;
  mutable std::unordered_map<std::string, Group> groups_;
  mutable std::unordered_map<Formula, ModelSet> box_cache_;
};

// Deductive closures are represented by their models.
using ClosedSet = ModelSet;

inline ClosedSet theory_closure(const Model& m, const CausalTheory& t) {
  return Semantics(t).closure(m.index());
}

// Successors in the canonical model, computed pointwise from the rule definition.
inline std::vector<Model> causal_successors(const Model& m, const CausalTheory& t) {
  std::vector<Model> out;
  for (const auto& next : enumerate_models(t.universe())) {
    bool ok = true;
    for (const auto& r : t.rules())
      if (holds(m, r.body) && !holds(next, r.head)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(next);
  }
  return out;
}

inline bool is_causally_explained(const Model& m, const CausalTheory& t) {
  return Semantics(t).explained(m.index());
}

inline std::vector<Model> causally_explained_models(const CausalTheory& t,
                                                    std::size_t max_atoms = kDefaultMaxAtoms) {
  Semantics s(t, max_atoms);
  return models_of(s.explained_models(), t.universe());
}

struct Consequence {
  bool holds = false;
  bool vacuous = false;  // no causally explained model exists
};

inline Consequence causal_consequence(const CausalTheory& t, const Formula& f) {
  Semantics s(t);
  ModelSet explained = s.explained_models();
  return {explained.subset_of(s.value(f)), explained.empty()};
}

// Causal closure of a deductively closed set (given by its models): every qualifying
// rule subset R, i.e. one whose bodies cover S, contributes the disjunction of
// its heads; the result is the closure of those contributions.
inline ClosedSet generalized_closure(const ClosedSet& s, const Semantics& sem) {
  const std::size_t r = sem.theory().size();
  if (r > 20) throw CapacityError("generalized closure limited to 20 rules");
  ClosedSet out = ModelSet::all(sem.atoms());
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << r); ++mask) {
    ModelSet bodies(sem.atoms()), heads(sem.atoms());
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1U) {
        bodies |= sem.body(i);
        heads |= sem.head(i);
      }
    if (s.subset_of(bodies)) out &= heads;
  }
  return out;
}

inline ClosedSet generalized_closure(const std::vector<Formula>& s, const CausalTheory& t) {
  Semantics sem(t);
  return generalized_closure(sem.valuator().eval_all(s), sem);
}

inline CausalTheory rename(const CausalTheory& t, const std::map<std::string, std::string>& names) {
  std::vector<std::string> atoms;
  for (const auto& a : t.universe().atoms()) {
    auto it = names.find(a);
    atoms.push_back(it == names.end() ? a : it->second);
  }
  CausalTheory out{Universe(atoms)};
  for (const auto& r : t.rules()) out.add({rename_atoms(r.body, names), rename_atoms(r.head, names)});
  return out;
}

inline Model rename(const Model& m, const Universe& renamed) { return Model(renamed, m.index()); }

}  // namespace causal
