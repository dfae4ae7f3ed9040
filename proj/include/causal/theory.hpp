#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "formula.hpp"
#include "model.hpp"

namespace causal {

// body ▷ head: if the body holds, the head has a cause.
struct CausalRule {
  Formula body;
  Formula head;
  friend bool operator==(const CausalRule&, const CausalRule&) = default;
  friend auto operator<=>(const CausalRule&, const CausalRule&) = default;
};

inline std::string to_string(const CausalRule& r) {
  return to_string(r.body) + " |> " + to_string(r.head);
}

inline void require_in_universe(const Formula& f, const Universe& u, const char* what) {
  std::set<std::string> atoms;
  collect_atoms(f, atoms);
  for (const auto& a : atoms)
    if (!u.contains(a)) throw std::invalid_argument(std::string(what) + ": atom '" + a + "' not declared");
}

// Finite set of causal rules over a fixed universe. Syntactic duplicates are
// dropped (first occurrence wins); rule order is otherwise preserved and is
// what "bitmask order" of rule subsets refers to.
class CausalTheory {
 public:
  CausalTheory() = default;
  explicit CausalTheory(Universe u, std::vector<CausalRule> rules = {}) : universe_(std::move(u)) {
    for (auto& r : rules) add(std::move(r));
  }

  void add(CausalRule r) {
    if (r.body.is_modal() || r.head.is_modal())
      throw std::invalid_argument("causal rules must be nonmodal: " + to_string(r));
    require_in_universe(r.body, universe_, "rule body");
    require_in_universe(r.head, universe_, "rule head");
    if (std::find(rules_.begin(), rules_.end(), r) == rules_.end()) rules_.push_back(std::move(r));
  }

  const Universe& universe() const noexcept { return universe_; }
  const std::vector<CausalRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  const CausalRule& operator[](std::size_t i) const { return rules_.at(i); }

  friend bool operator==(const CausalTheory&, const CausalTheory&) = default;

 private:
  Universe universe_;
  std::vector<CausalRule> rules_;
};

}  // namespace causal
