#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "checker.hpp"

namespace causal {

class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchLimits {
  std::size_t max_steps = 2'000'000;
};

enum class SearchStatus { Proved, Refuted, Exhausted };

struct SearchOutcome {
  SearchStatus status = SearchStatus::Exhausted;
  ProofTree proof;                   // when proved
  std::optional<Model> countermodel; // when refuted
  std::string message;
  explicit operator bool() const noexcept { return status == SearchStatus::Proved; }
};

// Explanation sets used when □p is introduced on the right: ⊆-minimal sets,
// keeping one representative per body extension and dropping sets whose
// bodies are strictly weaker than another's. The union of body extensions is
// that of the full family, so the step loses nothing.
inline std::vector<ExplanationSet> covering_explanation_sets(const std::vector<ExplanationSet>& all,
                                                             const Semantics& sem) {
  auto subset = [](const ExplanationSet& a, const ExplanationSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::vector<ExplanationSet> minimal;
  for (const auto& s : all) {
    bool is_min = std::none_of(all.begin(), all.end(),
                               [&](const ExplanationSet& o) { return o.size() < s.size() && subset(o, s); });
    if (is_min) minimal.push_back(s);
  }
  std::vector<ModelSet> values;
  for (const auto& s : minimal) values.push_back(bodies_value(s, sem));
  std::vector<ExplanationSet> out;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < minimal.size() && keep; ++j) {
      if (i == j) continue;
      if (values[i] == values[j]) keep = j > i;
      else if (values[i].subset_of(values[j])) keep = false;
    }
    if (keep) out.push_back(minimal[i]);
  }
  return out;
}

namespace detail {

// Backward search over set-based sequents. Every step is invertible in the canonical model,
// so a single failing leaf yields a countermodel to the root.
class CutFreeProver {
 public:
  CutFreeProver(const CausalTheory& t, SearchLimits limits) : sem_(t), limits_(limits) {}

  const Semantics& semantics() const noexcept { return sem_; }

  // Null when some leaf fails; refutation() then holds the countermodel.
  ProofTree prove(const Sequent& s) {
    if (++steps_ > limits_.max_steps) throw SearchExhausted("proof search step limit reached");
    if (auto dup = duplicate(s.left)) {
      Sequent next = s;
      remove_one(next.left, *dup);
      return unary(Rule::LW, s, prove(next), *dup);
    }
    if (auto dup = duplicate(s.right)) {
      Sequent next = s;
      remove_one(next.right, *dup);
      return unary(Rule::RW, s, prove(next), *dup);
    }
    std::string key = canonical_key(s);
    if (auto it = memo_.find(key); it != memo_.end()) return with_conclusion(it->second, s);
    ProofTree t = step(s);
    if (t) memo_.emplace(std::move(key), t);
    return t;
  }

  const std::optional<ModelIndex>& refutation() const noexcept { return refuted_; }

 private:
  static std::optional<Formula> duplicate(const Multiset& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j)
        if (xs[i] == xs[j]) return xs[i];
    return std::nullopt;
  }

  static ProofTree unary(Rule r, const Sequent& s, ProofTree premise, const Formula& principal) {
    return premise ? make_proof(r, s, {std::move(premise)}, principal) : nullptr;
  }
  ProofTree binary(Rule r, const Sequent& s, const Sequent& a, const Sequent& b, const Formula& principal) {
    ProofTree x = prove(a);
    if (!x) return nullptr;
    ProofTree y = prove(b);
    return y ? make_proof(r, s, {std::move(x), std::move(y)}, principal) : nullptr;
  }

  static std::string canonical_key(const Sequent& s) {
    Multiset l = s.left, r = s.right;
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    return to_string(Sequent{l, r});
  }

  // Weaken s down to the given axiom-shaped leaf.
  static ProofTree weaken_to(const Sequent& s, const Sequent& leaf_seq, ProofTree leaf) {
    Multiset extra_l = s.left, extra_r = s.right;
    for (const auto& f : leaf_seq.left) remove_one(extra_l, f);
    for (const auto& f : leaf_seq.right) remove_one(extra_r, f);
    Sequent cur = leaf_seq;
    ProofTree t = std::move(leaf);
    for (const auto& f : extra_r) {
      cur.right.push_back(f);
      t = make_proof(Rule::RW, cur, {t}, f);
    }
    for (const auto& f : extra_l) {
      cur.left.push_back(f);
      t = make_proof(Rule::LW, cur, {t}, f);
    }
    return with_conclusion(t, s);
  }

  std::optional<ProofTree> close(const Sequent& s) {
    for (const auto& f : s.left)
      if (f.op() == Op::Bottom) return weaken_to(s, {{f}, {}}, make_proof(Rule::BotL, {{f}, {}}));
    for (const auto& f : s.right)
      if (f.op() == Op::Top) return weaken_to(s, {{}, {f}}, make_proof(Rule::TopR, {{}, {f}}));
    for (const auto& f : s.left)
      if (count_of(s.right, f)) return weaken_to(s, {{f}, {f}}, make_proof(Rule::Ax, {{f}, {f}}));
    return std::nullopt;
  }

  const std::vector<ExplanationSet>& all_sets(const Formula& p) {
    auto it = all_sets_.find(p);
    if (it == all_sets_.end()) it = all_sets_.emplace(p, explanation_sets(p, sem_)).first;
    return it->second;
  }

  const std::vector<ExplanationSet>& right_sets(const Formula& p) {
    auto it = right_sets_.find(p);
    if (it == right_sets_.end()) it = right_sets_.emplace(p, covering_explanation_sets(all_sets(p), sem_)).first;
    return it->second;
  }

  static Sequent replace_left(const Sequent& s, const Formula& f, const Multiset& add) {
    Sequent out = s;
    remove_one(out.left, f);
    out.left = plus(out.left, add);
    return out;
  }
  static Sequent replace_right(const Sequent& s, const Formula& f, const Multiset& add) {
    Sequent out = s;
    remove_one(out.right, f);
    out.right = plus(out.right, add);
    return out;
  }

  ProofTree step(const Sequent& s) {
    if (auto t = close(s)) return *t;
    auto find = [](const Multiset& xs, Op op) -> std::optional<Formula> {
      for (const auto& f : xs)
        if (f.op() == op) return f;
      return std::nullopt;
    };
    if (auto f = find(s.left, Op::Not))
      return unary(Rule::NotL, s, prove({without(s.left, *f), plus(s.right, {f->lhs()})}), *f);
    if (auto f = find(s.right, Op::Not))
      return unary(Rule::NotR, s, prove({plus(s.left, {f->lhs()}), without(s.right, *f)}), *f);
    if (auto f = find(s.left, Op::And))
      return unary(Rule::AndL, s, prove(replace_left(s, *f, {f->lhs(), f->rhs()})), *f);
    if (auto f = find(s.right, Op::Or))
      return unary(Rule::OrR, s, prove(replace_right(s, *f, {f->lhs(), f->rhs()})), *f);
    if (auto f = find(s.right, Op::Implies))
      return unary(Rule::ImpR, s, prove({plus(s.left, {f->lhs()}), replace_right(s, *f, {f->rhs()}).right}), *f);
    if (auto f = find(s.right, Op::Box)) return box_right(s, *f);
    if (auto f = find(s.right, Op::And))
      return binary(Rule::AndR, s, replace_right(s, *f, {f->lhs()}), replace_right(s, *f, {f->rhs()}), *f);
    if (auto f = find(s.left, Op::Or))
      return binary(Rule::OrL, s, replace_left(s, *f, {f->lhs()}), replace_left(s, *f, {f->rhs()}), *f);
    if (auto f = find(s.left, Op::Implies))
      return binary(Rule::ImpL, s, {without(s.left, *f), plus(s.right, {f->lhs()})}, replace_left(s, *f, {f->rhs()}),
                    *f);
    if (auto f = find(s.left, Op::Box)) {
      RuleData d;
      d.principal = *f;
      d.family = all_sets(f->lhs());
      std::vector<ProofTree> premises;
      for (const auto& set : d.family) {
        premises.push_back(prove(replace_left(s, *f, bodies_of(set, sem_.theory()))));
        if (!premises.back()) return nullptr;
      }
      return make_proof(Rule::BoxL, s, std::move(premises), std::move(d));
    }
    // Only atoms remain and nothing closes: atoms on the left true, the rest false.
    ModelIndex w = 0;
    const std::size_t n = sem_.atoms();
    for (const auto& f : s.left)
      if (f.op() == Op::Atom) w |= ModelIndex{1} << (n - 1 - *sem_.universe().index_of(f.name()));
    refuted_ = w;
    return nullptr;
  }

  static Multiset without(Multiset xs, const Formula& f) {
    remove_one(xs, f);
    return xs;
  }

  // □p on the right is traded for the body conjunctions of its covering
  // explanation sets: contract □p once per set, then apply □R per copy.
  ProofTree box_right(const Sequent& s, const Formula& boxp) {
    const auto& sets = right_sets(boxp.lhs());
    if (sets.empty()) return unary(Rule::RW, s, prove({s.left, without(s.right, boxp)}), boxp);
    std::vector<Sequent> contracted{s};
    for (std::size_t i = 1; i < sets.size(); ++i) {
      Sequent next = contracted.back();
      next.right.push_back(boxp);
      contracted.push_back(next);
    }
    ProofTree t = discharge(contracted.back(), boxp, sets, 0);
    if (!t) return nullptr;
    for (std::size_t i = contracted.size() - 1; i > 0; --i)
      t = make_proof(Rule::RC, contracted[i - 1], {t}, boxp);
    return t;
  }

  ProofTree discharge(const Sequent& cur, const Formula& boxp, const std::vector<ExplanationSet>& sets,
                      std::size_t idx) {
    if (idx == sets.size()) return prove(cur);
    const auto& set = sets[idx];
    Sequent next = replace_right(cur, boxp, {conjoin(bodies_of(set, sem_.theory()))});
    ProofTree rest = discharge(next, boxp, sets, idx + 1);
    if (!rest) return nullptr;
    ProofTree side = prove({heads_of(set, sem_.theory()), {boxp.lhs()}});
    if (!side) throw std::logic_error("explanation set failed its own head premise");
    RuleData d;
    d.principal = boxp;
    d.set = set;
    return make_proof(Rule::BoxR, cur, {std::move(rest), std::move(side)}, std::move(d));
  }

  Semantics sem_;
  SearchLimits limits_;
  std::size_t steps_ = 0;
  std::optional<ModelIndex> refuted_;
  std::unordered_map<std::string, ProofTree> memo_;
  std::unordered_map<Formula, std::vector<ExplanationSet>> all_sets_, right_sets_;
};

}  // namespace detail

inline SearchOutcome prove_cut_free(const Sequent& s, const CausalTheory& t, SearchLimits limits = {}) {
  for (const auto* side : {&s.left, &s.right})
    for (const auto& f : *side) require_in_universe(f, t.universe(), "sequent");
  detail::CutFreeProver prover(t, limits);
  SearchOutcome out;
  try {
    out.proof = prover.prove(s);
    if (out.proof) {
      out.status = SearchStatus::Proved;
    } else {
      out.status = SearchStatus::Refuted;
      out.countermodel = Model(t.universe(), *prover.refutation());
      out.message = "countermodel " + out.countermodel->to_string();
    }
  } catch (const SearchExhausted& e) {
    out.status = SearchStatus::Exhausted;
    out.message = e.what();
  }
  return out;
}

}  // namespace causal
