#pragma once
// Proofs with multicuts, composed from prover output: a chain of cut formulas
// A1..Ak where each right premise consumes Ai and hands Ai+1 to the next cut.

#include <optional>
#include <random>

#include "causal/prover.hpp"
#include "grid.hpp"

namespace proofgen {

using namespace causal;

inline const Formula& pick(std::mt19937& rng, const std::vector<Formula>& pool) {
  return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

inline Multiset small_side(std::mt19937& rng, const std::vector<Formula>& pool, std::size_t max) {
  Multiset out;
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, max)(rng);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pick(rng, pool));
  return out;
}

inline std::optional<ProofTree> prove_valid(const Sequent& s, const CausalTheory& t, const Semantics& sem) {
  if (!sem.entails(s.left, s.right)) return std::nullopt;
  auto o = prove_cut_free(s, t);
  if (!o) return std::nullopt;
  return o.proof;
}

// Valid sequent of the form  base_left, fixed_left ⊢ fixed_right, base_right  by rejection sampling.
inline std::optional<ProofTree> sample(std::mt19937& rng, const CausalTheory& t, const Semantics& sem,
                                       const Multiset& fixed_left, const Multiset& fixed_right, int tries = 60) {
  const auto& pool = grid::modal_pool();
  for (int i = 0; i < tries; ++i) {
    Sequent s{small_side(rng, pool, 2), small_side(rng, pool, 1)};
    s.left.insert(s.left.end(), fixed_left.begin(), fixed_left.end());
    s.right.insert(s.right.begin(), fixed_right.begin(), fixed_right.end());
    if (auto p = prove_valid(s, t, sem)) return p;
  }
  return std::nullopt;
}

inline std::optional<ProofTree> with_cuts(std::mt19937& rng, const CausalTheory& t, std::size_t cuts) {
  const Semantics sem(t);
  const auto& pool = grid::modal_pool();
  std::vector<Formula> chain;
  for (std::size_t i = 0; i <= cuts; ++i) chain.push_back(pick(rng, pool));
  const std::size_t m0 = 1 + rng() % 2;
  auto left = sample(rng, t, sem, {}, Multiset(m0, chain[0]));
  if (!left) return std::nullopt;
  ProofTree proof = *left;
  for (std::size_t i = 0; i < cuts; ++i) {
    const Formula& a = chain[i];
    const std::size_t n = 1 + rng() % 2;
    Multiset hand_on;
    if (i + 1 < cuts) hand_on.push_back(chain[i + 1]);
    auto right = sample(rng, t, sem, Multiset(n, a), hand_on);
    if (!right) return std::nullopt;
    RuleData d;
    d.principal = a;
    d.m = count_of(proof->conclusion.right, a);
    d.n = count_of((*right)->conclusion.left, a);
    Multiset r1 = proof->conclusion.right, l2 = (*right)->conclusion.left;
    remove_n(r1, a, d.m);
    remove_n(l2, a, d.n);
    Sequent c{plus(proof->conclusion.left, l2), plus(r1, (*right)->conclusion.right)};
    proof = make_proof(Rule::Multicut, std::move(c), {proof, *right}, std::move(d));
  }
  return proof;
}

}  // namespace proofgen
