#include <gtest/gtest.h>

#include <random>

#include "causal/annotation.hpp"
#include "causal/parser.hpp"
#include "causal/prover.hpp"
#include "grid.hpp"
#include "proofgen.hpp"

using namespace causal;

namespace {

CausalTheory theta1() { return parse_theory("atoms: p q\nrule: p |> p\nrule: p |> q\n"); }

Formula P(std::string_view s) { return parse_formula(s); }
Sequent S(std::string_view s) { return parse_sequent(s); }

ProofTree ax(std::string_view f) { return make_proof(Rule::Ax, {{P(f)}, {P(f)}}); }

// p ⊢ []q from the rule p |> q.
ProofTree box_right_example() {
  RuleData d;
  d.principal = P("[]q");
  d.set = {1};
  return make_proof(Rule::BoxR, S("p |- []q"), {ax("p"), ax("q")}, d);
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(formula_rank(P("p")), 0u);
  EXPECT_EQ(formula_rank(P("[](p & q)")), 0u);
  EXPECT_EQ(formula_rank(P("!p -> q")), 2u);
  EXPECT_EQ(formula_rank(P("!![]!p")), 2u);
}

TEST(Checker, AcceptsHandBuiltProofs) {
  auto t = theta1();
  EXPECT_TRUE(check_proof(ax("p"), t));
  EXPECT_TRUE(check_proof(box_right_example(), t));

  RuleData d;
  d.principal = P("[]!p");
  EXPECT_TRUE(check_proof(make_proof(Rule::BoxL, S("[]!p |- q"), {}, d), t));

  // ⊢ □true via the empty rule set; the body premise is ⊢ true.
  RuleData e;
  e.principal = P("[]true");
  auto top = make_proof(Rule::TopR, S("|- true"));
  EXPECT_TRUE(check_proof(make_proof(Rule::BoxR, S("|- []true"), {top, top}, e), t));
}

TEST(Checker, RejectsBrokenProofs) {
  auto t = theta1();
  EXPECT_FALSE(check_proof(make_proof(Rule::Ax, S("p |- q")), t));
  EXPECT_FALSE(check_proof(make_proof(Rule::Ax, S("z |- z")), t));

  RuleData wrong_rule;
  wrong_rule.principal = P("[]q");
  wrong_rule.set = {0};
  EXPECT_FALSE(check_proof(make_proof(Rule::BoxR, S("p |- []q"), {ax("p"), ax("q")}, wrong_rule), t));

  RuleData missing;
  missing.principal = P("[]q");
  missing.set = {7};
  auto r = check_proof(make_proof(Rule::BoxR, S("p |- []q"), {ax("p"), ax("q")}, missing), t);
  EXPECT_FALSE(r);
  EXPECT_NE(r.reason.find("does not exist"), std::string::npos);

  // □L for □q must list both explanation sets {1} and {0,1}.
  RuleData partial;
  partial.principal = P("[]q");
  partial.family = {{1}};
  EXPECT_FALSE(check_proof(make_proof(Rule::BoxL, S("[]q |- p"), {ax("p")}, partial), t));

  RuleData cut;
  cut.principal = P("p");
  auto zero = make_proof(Rule::Multicut, S("p |- p"), {ax("p"), ax("p")}, cut);
  EXPECT_FALSE(check_proof(zero, t));

  auto bad_leaf = make_proof(Rule::AndR, S("p, q |- p & q"),
                             {make_proof(Rule::LW, S("p, q |- p"), {ax("p")}, P("q")),
                              make_proof(Rule::LW, S("p, q |- q"), {ax("p")}, P("p"))},
                             P("p & q"));
  auto res = check_proof(bad_leaf, t);
  EXPECT_FALSE(res);
  EXPECT_EQ(res.node->rule, Rule::LW);
}

TEST(Prover, Theta1Examples) {
  auto t = theta1();
  auto ok = prove_cut_free(S("p |- []q"), t);
  ASSERT_TRUE(ok);
  EXPECT_TRUE(check_proof(ok.proof, t));
  EXPECT_TRUE(is_cut_free(ok.proof));

  auto top = prove_cut_free(S("|- []true"), CausalTheory(Universe({"p"})));
  ASSERT_TRUE(top);

  auto no = prove_cut_free(S("q |- []q"), t);
  ASSERT_EQ(no.status, SearchStatus::Refuted);
  EXPECT_EQ(no.countermodel->to_string(), "p=0,q=1");
  EXPECT_THROW(prove_cut_free(S("z |- z"), t), std::invalid_argument);
}

TEST(Prover, ProvesExactMultisets) {
  auto t = theta1();
  auto o = prove_cut_free(S("p, p, q |- []q, []q, q"), t);
  ASSERT_TRUE(o);
  EXPECT_TRUE(same_sequent(o.proof->conclusion, S("p, p, q |- []q, []q, q")));
  EXPECT_TRUE(check_proof(o.proof, t));
}

TEST(Prover, StepLimitIsReported) {
  auto t = parse_theory("atoms: a b c p\nrule: a |> p\nrule: b |> p\nrule: c |> p\n");
  auto o = prove_cut_free(S("[]p |- a | b | c"), t, {5});
  EXPECT_EQ(o.status, SearchStatus::Exhausted);
  EXPECT_FALSE(o.message.empty());
}

// Soundness and completeness against the canonical model on random sequents up to depth 3.
TEST(Prover, AgreesWithSemanticsOnRandomSequents) {
  std::mt19937 rng(404);
  for (int round = 0; round < 400; ++round) {
    auto t = grid::random_theory(rng, grid::pqr(), 3);
    Sequent s;
    for (int i = 0, n = 1 + rng() % 2; i < n; ++i) {
      auto f = grid::random_formula(rng, grid::pqr(), 3);
      s.left.push_back(rng() % 3 == 0 ? Formula::box(f) : f);
    }
    for (int i = 0, n = 1 + rng() % 2; i < n; ++i) {
      auto f = grid::random_formula(rng, grid::pqr(), 2);
      s.right.push_back(rng() % 2 == 0 ? Formula::box(f) : f);
    }
    Semantics sem(t);
    auto o = prove_cut_free(s, t);
    ASSERT_NE(o.status, SearchStatus::Exhausted) << to_string(s);
    EXPECT_EQ(bool(o), sem.entails(s.left, s.right)) << to_string(s);
    if (o) {
      EXPECT_TRUE(check_proof(o.proof, t)) << to_string(s);
    } else {
      ModelIndex m = o.countermodel->index();
      EXPECT_TRUE(sem.value_all(s.left).contains(m));
      EXPECT_FALSE(sem.value_any(s.right).contains(m));
    }
  }
}

TEST(Proofs, CheckedProofsAreSound) {
  std::mt19937 rng(8);
  int seen = 0;
  while (seen < 60) {
    auto t = grid::random_theory(rng, grid::pqr(), 3);
    auto p = proofgen::with_cuts(rng, t, 1 + rng() % 3);
    if (!p) continue;
    ++seen;
    ASSERT_TRUE(check_proof(*p, t));
    EXPECT_TRUE(Semantics(t).entails((*p)->conclusion.left, (*p)->conclusion.right));
  }
}

TEST(Proofs, SerializationRoundTrips) {
  auto t = theta1();
  for (auto text : {"p |- []q", "[]q |- p", "[]p, p -> q |- [](p & q)", "|- []true", "[]!p |- false"}) {
    auto o = prove_cut_free(S(text), t);
    ASSERT_TRUE(o) << text;
    auto s = serialize_proof(o.proof);
    auto back = parse_proof(s);
    EXPECT_EQ(serialize_proof(back), s);
    EXPECT_TRUE(check_proof(back, t));
  }
  std::mt19937 rng(21);
  auto wide = parse_theory("atoms: p q r\nrule: p |> p\nrule: p |> q\n");
  for (int made = 0; made < 10;) {
    auto p = proofgen::with_cuts(rng, wide, 2);
    if (!p) continue;
    ++made;
    auto back = parse_proof(serialize_proof(*p));
    EXPECT_EQ(serialize_proof(back), serialize_proof(*p));
    EXPECT_EQ(count_cuts(back), 2u);
  }
}

TEST(Proofs, SerializedFormat) {
  EXPECT_EQ(serialize_proof(box_right_example()),
            "BoxR | p ⊢ []q | {p=[]q; set=1}\n"
            "  Ax | p ⊢ p | {}\n"
            "  Ax | q ⊢ q | {}\n");
  EXPECT_THROW(parse_proof("Ax | p ⊢ p | {}\n Ax | p ⊢ p | {}\n"), ParseError);
  EXPECT_THROW(parse_proof("Nope | p ⊢ p | {}\n"), ParseError);
  EXPECT_THROW(parse_proof("Ax | p ⊢ p\n"), ParseError);
}

TEST(Annotation, Examples) {
  EXPECT_EQ(annotate(ax("p")).annotation, (Annotation{0, 0, 0}));
  auto o = prove_cut_free(S("p |- []q"), theta1());
  ASSERT_TRUE(o);
  auto a = annotate(o.proof).annotation;
  EXPECT_EQ(a.zeta, 0u);
  EXPECT_EQ(a.rho, 0u);

  RuleData d;
  d.principal = P("p");
  d.m = d.n = 1;
  auto cut = make_proof(Rule::Multicut, S("p |- p"), {ax("p"), ax("p")}, d);
  ASSERT_TRUE(check_proof(cut, theta1()));
  EXPECT_EQ(annotate(cut).annotation.rho, 1u);
  EXPECT_EQ(annotate(cut).annotation.zeta, 0u);
}

TEST(Annotation, CutFreeIffZetaRhoZero) {
  std::mt19937 rng(13);
  for (int made = 0; made < 30;) {
    auto t = grid::random_theory(rng, grid::pqr(), 3);
    auto p = proofgen::with_cuts(rng, t, 1);
    if (!p) continue;
    ++made;
    auto a = annotate(*p).annotation;
    EXPECT_GT(a.rho + a.zeta, 0u);
    for (const auto& prem : (*p)->premises) {
      auto b = annotate(prem).annotation;
      EXPECT_EQ(b.rho, 0u);
      EXPECT_EQ(b.zeta, 0u);
    }
  }
}
