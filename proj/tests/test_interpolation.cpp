#include <gtest/gtest.h>

#include "causal/interpolation.hpp"
#include "causal/parser.hpp"
#include "grid.hpp"

using namespace causal;

namespace {

CausalTheory theta1() { return parse_theory("atoms: p q\nrule: p |> p\nrule: p |> q\n"); }
Formula P(std::string_view s) { return parse_formula(s); }
Sequent S(std::string_view s) { return parse_sequent(s); }

ProofTree proved(std::string_view s, const CausalTheory& t) {
  auto o = prove_cut_free(S(s), t);
  if (!o) throw std::runtime_error("unprovable: " + std::string(s));
  return o.proof;
}

}  // namespace

TEST(Interpolation, SingleRule) {
  auto t = theta1();
  auto parts = interpolate(proved("p |- []q", t), t);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].a, P("p"));
  EXPECT_EQ(parts[0].b, P("q"));
  EXPECT_EQ(parts[0].rules, ExplanationSet{1});
}

TEST(Interpolation, EmptyRuleSet) {
  CausalTheory t(Universe({"p"}));
  auto parts = interpolate(proved("|- []true", t), t);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].a, Formula::top());
  EXPECT_EQ(parts[0].b, Formula::top());
}

TEST(Interpolation, HeadEntailsWeakerTarget) {
  auto t = theta1();
  auto parts = interpolate(proved("p |- [](q | p)", t), t);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].a, P("p"));
  EXPECT_EQ(parts[0].b, P("p"));
}

TEST(Interpolation, ShapeErrors) {
  auto t = theta1();
  auto plain = proved("p |- p", t);
  EXPECT_THROW(interpolate(plain, t), std::invalid_argument);
  EXPECT_THROW(interpolate(plain, P("[]q"), t), std::invalid_argument);
}

TEST(NormalForm, Examples) {
  auto t = theta1();
  auto nf = normal_form({P("p")}, P("q"), t);
  ASSERT_TRUE(nf);
  EXPECT_EQ(nf.form->gamma, std::vector<Formula>{P("p")});
  EXPECT_EQ(nf.form->a, P("p"));
  EXPECT_EQ(nf.form->b, P("q"));

  auto fail = normal_form({P("q")}, P("q"), t);
  EXPECT_FALSE(fail);
  ASSERT_TRUE(fail.countermodel);
  EXPECT_EQ(fail.countermodel->to_string(), "p=0,q=1");
  EXPECT_THROW(normal_form({P("[]q")}, P("q"), t), std::invalid_argument);
}

TEST(NormalForm, Scriven) {
  auto t = parse_theory("atoms: a b c p\nrule: a |> p\nrule: b |> p\nrule: c |> p\n");
  auto nf = normal_form({P("a")}, P("p"), t);
  ASSERT_TRUE(nf);
  EXPECT_EQ(nf.form->gamma, std::vector<Formula>{P("a")});
  EXPECT_EQ(nf.form->a, P("a"));
  EXPECT_EQ(nf.form->b, P("p"));

  auto wide = normal_form({P("a | b | c")}, P("p"), t);
  ASSERT_TRUE(wide);
  Semantics sem(t);
  EXPECT_EQ(sem.value(wide.form->a), sem.value(P("a | b | c")));
}

// Γ' ⊢ a, a ⊢ □b and b ⊢ p over random theories and the nonmodal grid.
TEST(NormalForm, ThreeEntailmentsHold) {
  const auto& pool = grid::nonmodal_pool();
  for (const auto& t : grid::theories(15, 99)) {
    Semantics sem(t);
    for (const auto& g : grid::sides(pool)) {
      if (g.size() > 1) continue;
      for (const auto& p : pool) {
        auto nf = normal_form(g, p, t);
        EXPECT_EQ(bool(nf), sem.entails(g, {Formula::box(p)}));
        if (!nf) continue;
        const auto& f = *nf.form;
        EXPECT_TRUE(sem.entails(f.gamma, {f.a}));
        EXPECT_TRUE(sem.entails({f.a}, {Formula::box(f.b)}));
        EXPECT_TRUE(sem.entails({f.b}, {p}));
        for (const auto& part : f.parts) {
          EXPECT_TRUE(sem.entails({part.a}, {Formula::box(part.b)}));
          EXPECT_TRUE(sem.entails({part.b}, {p}));
        }
      }
    }
  }
}
