#include <gtest/gtest.h>

#include <random>

#include "causal/action.hpp"

using namespace causal;

namespace {

const char* kYale =
    "fluents: alive loaded\n"
    "actions: wait shoot\n"
    "action shoot: pre loaded post !alive & !loaded\n"
    "occurs: wait@0 shoot@1\n"
    "init: alive loaded\n"
    "horizon: 2\n";

// Explained models by brute force over every valuation, via successor sets.
std::vector<ModelIndex> explained_by_hand(const CausalTheory& t) {
  std::vector<ModelIndex> out;
  for (const auto& m : enumerate_models(t.universe())) {
    auto succ = causal_successors(m, t);
    if (succ.size() == 1 && succ[0] == m) out.push_back(m.index());
  }
  return out;
}

}  // namespace

TEST(Action, YaleShootingHasOneHistory) {
  auto d = parse_domain(kYale);
  auto t = compile_domain(d);
  EXPECT_EQ(t.universe().size(), 10u);
  EXPECT_EQ(t.size(), 16u);
  auto hs = solve_histories(d);
  ASSERT_EQ(hs.size(), 1u);
  const auto& h = hs[0];
  for (std::size_t i = 0; i <= 2; ++i) {
    EXPECT_EQ(h.fluent("alive", i), i < 2);
    EXPECT_EQ(h.fluent("loaded", i), i < 2);
  }
  EXPECT_TRUE(h.occurs("wait", 0));
  EXPECT_TRUE(h.occurs("shoot", 1));
  EXPECT_FALSE(h.occurs("shoot", 0));
  EXPECT_EQ(render_history(h),
            "t      | 0 1 2\n"
            "alive  | ⊤ ⊤ ⊥\n"
            "loaded | ⊤ ⊤ ⊥\n"
            "wait   | ⊤ ⊥\n"
            "shoot  | ⊥ ⊤\n");
  EXPECT_EQ(explained_by_hand(t), std::vector<ModelIndex>{h.model.index()});
}

TEST(Action, UnloadedGunHistoryIsNotExplained) {
  auto d = parse_domain(kYale);
  auto t = compile_domain(d);
  Model bad(t.universe(), 0);
  for (auto [atom, v] : std::vector<std::pair<const char*, bool>>{
           {"alive_0", true}, {"alive_1", true}, {"alive_2", true}, {"loaded_0", true},
           {"wait_0", true}, {"shoot_1", true}})
    bad = bad.with(atom, v);
  EXPECT_FALSE(is_causally_explained(bad, t));
  EXPECT_FALSE(bad["loaded_1"]);
}

TEST(Action, RuleSchemata) {
  auto t = compile_domain(parse_domain(kYale));
  std::vector<std::string> rules;
  for (const auto& r : t.rules()) rules.push_back(to_string(r));
  EXPECT_EQ(rules.front(), "loaded_0 & shoot_0 |> !alive_1 & !loaded_1");
  EXPECT_EQ(rules[2], "wait_0 |> wait_0");
  EXPECT_EQ(rules[4], "!wait_1 |> !wait_1");
  EXPECT_EQ(rules[6], "alive_0 & alive_1 |> alive_1");
  EXPECT_EQ(rules[7], "!alive_0 & !alive_1 |> !alive_1");
  EXPECT_EQ(rules.back(), "loaded_0 |> loaded_0");
}

TEST(Action, IdleFluentPersists) {
  auto d = parse_domain("fluents: f\ninit: f\nhorizon: 1\n");
  auto hs = solve_histories(d);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(render_history(hs[0]), "t | 0 1\nf | ⊤ ⊤\n");
}

TEST(Action, EmptyDomain) {
  ActionDomain d;
  EXPECT_EQ(compile_domain(d).size(), 0u);
  auto hs = solve_histories(d);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(render_history(hs[0]), "");
}

TEST(Action, WaitHasNoEffectRules) {
  auto d = parse_domain("fluents: f\nactions: wait\noccurs: wait@0\nhorizon: 1\n");
  auto t = compile_domain(d);
  // one occurrence rule and two persistence rules
  EXPECT_EQ(t.size(), 3u);
}

TEST(Action, InvalidDomains) {
  EXPECT_THROW(compile_domain(parse_domain("fluents: alive\ninit: alive !alive\nhorizon: 1\n")), DomainError);
  EXPECT_THROW(compile_domain(parse_domain("actions: a\noccurs: a@1\nhorizon: 1\n")), DomainError);
  EXPECT_THROW(compile_domain(parse_domain("fluents: f\ninit: g\nhorizon: 1\n")), DomainError);
  EXPECT_THROW(compile_domain(parse_domain("fluents: f\nactions: f\nhorizon: 1\n")), DomainError);
  EXPECT_THROW(parse_domain("fluents: f\nhorizon: two\n"), ParseError);
  EXPECT_THROW(parse_domain("fluents: f\nactions: a\noccurs: a1\nhorizon: 1\n"), ParseError);
  EXPECT_THROW(parse_domain("fluents: f\nactions: a\naction a: post f\n"), ParseError);
}

// With every fluent fixed at time 0 and no actions, the only history keeps every value.
TEST(Action, InertiaWithoutActions) {
  std::mt19937 rng(6);
  for (int round = 0; round < 20; ++round) {
    ActionDomain d;
    d.fluents = {"f", "g", "h"};
    d.horizon = 1 + rng() % 3;
    for (const auto& f : d.fluents) d.init.push_back({f, bool(rng() & 1U)});
    auto hs = solve_histories(d);
    ASSERT_EQ(hs.size(), 1u);
    for (const auto& l : d.init)
      for (std::size_t t = 0; t <= d.horizon; ++t) EXPECT_EQ(hs[0].fluent(l.fluent, t), l.positive);
  }
}

// Unconstrained initial fluents stay free: one history per initial valuation.
TEST(Action, FreeInitialStateMultiplies) {
  auto d = parse_domain("fluents: f g\nhorizon: 2\n");
  EXPECT_TRUE(solve_histories(d).empty());
  d.init = {{"f", true}};
  EXPECT_TRUE(solve_histories(d).empty());
  d.init.push_back({"g", false});
  EXPECT_EQ(solve_histories(d).size(), 1u);
}

TEST(Action, RandomDomainsMatchBruteForce) {
  std::mt19937 rng(10);
  for (int round = 0; round < 20; ++round) {
    ActionDomain d;
    d.fluents = {"f", "g"};
    d.actions = {"a"};
    d.horizon = 1 + rng() % 2;
    d.effects["a"] = {{{{"f", bool(rng() & 1U)}}, {{"g", bool(rng() & 1U)}}}};
    for (std::size_t t = 0; t < d.horizon; ++t)
      if (rng() & 1U) d.occurrences.push_back({"a", t});
    d.init = {{"f", bool(rng() & 1U)}, {"g", bool(rng() & 1U)}};
    std::vector<ModelIndex> got;
    for (const auto& h : solve_histories(d)) got.push_back(h.model.index());
    EXPECT_EQ(got, explained_by_hand(compile_domain(d)));
  }
}
