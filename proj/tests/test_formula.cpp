#include <gtest/gtest.h>

#include <random>

#include "causal/parser.hpp"
#include "grid.hpp"

using namespace causal;

namespace {
Formula P(std::string_view s) { return parse_formula(s); }
}  // namespace

TEST(Formula, StructuralEqualityAndCachedMeasures) {
  Formula a = P("p & (q -> []r)");
  Formula b = Formula::conjunction(Formula::atom("p"),
                                   Formula::implication(Formula::atom("q"), Formula::box(Formula::atom("r"))));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.size(), 6u);
  EXPECT_EQ(a.modal_depth(), 1);
  EXPECT_EQ(P("[][]p | q").modal_depth(), 2);
  EXPECT_FALSE(P("!(p | q)").is_modal());
  EXPECT_NE(P("p & q"), P("q & p"));
}

TEST(Formula, TotalOrderIsConsistentWithEquality) {
  auto pool = grid::modal_pool();
  for (const auto& x : pool)
    for (const auto& y : pool) {
      EXPECT_EQ((x <=> y) == 0, x == y);
      EXPECT_EQ(x <=> y, 0 <=> (y <=> x));
    }
}

TEST(Parser, PrecedenceAndAssociativity) {
  EXPECT_EQ(P("p | q & r"), P("p | (q & r)"));
  EXPECT_EQ(P("p -> q -> r"), P("p -> (q -> r)"));
  EXPECT_EQ(P("!p & q"), P("(!p) & q"));
  EXPECT_EQ(P("[]p -> q"), P("([]p) -> q"));
  EXPECT_EQ(P("p & q & r"), P("(p & q) & r"));
  EXPECT_EQ(P("true"), Formula::top());
  EXPECT_EQ(P("false"), Formula::bottom());
}

TEST(Parser, PrintParseRoundTrip) {
  for (const auto& f : grid::modal_pool()) EXPECT_EQ(P(to_string(f)), f) << to_string(f);
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    Formula f = grid::random_formula(rng, grid::pqr(), 3);
    if (i % 3 == 0) f = Formula::box(f);
    if (i % 5 == 0) f = Formula::implication(f, Formula::box(Formula::disjunction(f, f)));
    EXPECT_EQ(P(to_string(f)), f) << to_string(f);
  }
}

TEST(Parser, ErrorsCarryOffsets) {
  try {
    P("p &");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
  }
  try {
    P("(p | q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    P("p $ q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  Universe u({"p"});
  EXPECT_THROW(parse_formula("p & z", u), ParseError);
}

TEST(Parser, TheoryDslPositions) {
  auto t = parse_theory("atoms: p q\n# comment\nrule: p |> q\nrule: !q |> !q  # trailing\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(to_string(t[0]), "p |> q");
  EXPECT_EQ(t.universe().atoms(), (std::vector<std::string>{"p", "q"}));
  try {
    parse_theory("atoms: p\nrule: p |> zz\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 12u);
  }
  EXPECT_THROW(parse_theory("atoms: p\nrule: p\n"), ParseError);
  EXPECT_THROW(parse_theory("atom: p\n"), ParseError);
  EXPECT_EQ(parse_theory(to_dsl(t)).rules(), t.rules());
}

TEST(Parser, SequentText) {
  auto s = parse_sequent_text("p, q -> r |- []r, false");
  ASSERT_EQ(s.left.size(), 2u);
  ASSERT_EQ(s.right.size(), 2u);
  EXPECT_EQ(s.right[0], P("[]r"));
  auto empty = parse_sequent_text("|- true");
  EXPECT_TRUE(empty.left.empty());
  EXPECT_THROW(parse_sequent_text("p, q"), ParseError);
}

TEST(Parser, AlternativeModalityToken) {
  ParseOptions o;
  o.modality = "C";
  EXPECT_EQ(parse_formula("p -> C p", o), P("p -> []p"));
  EXPECT_EQ(parse_formula("Cp", o), Formula::atom("Cp"));
  EXPECT_EQ(to_string(P("[]!p"), {"C", true}), "C !p");
}

TEST(Formula, FoldsAndRenaming) {
  EXPECT_EQ(conjoin({}), Formula::top());
  EXPECT_EQ(disjoin({}), Formula::bottom());
  EXPECT_EQ(conjoin({P("a"), P("b"), P("c")}), P("a & (b & c)"));
  EXPECT_EQ(disjoin({P("a")}), P("a"));
  std::map<std::string, std::string> m{{"p", "q"}, {"q", "p"}};
  EXPECT_EQ(rename_atoms(P("p & []q"), m), P("q & []p"));
}

TEST(Model, IndexOrderIsLexicographic) {
  Universe u({"a", "b"});
  auto ms = enumerate_models(u);
  ASSERT_EQ(ms.size(), 4u);
  EXPECT_EQ(ms[1].to_string(), "a=0,b=1");
  EXPECT_EQ(ms[2].to_string(), "a=1,b=0");
  EXPECT_TRUE(ms[3]["a"] && ms[3]["b"]);
  EXPECT_EQ(ms[0].with("a", true), ms[2]);
  EXPECT_THROW(Universe({"a", "a"}), std::invalid_argument);
  EXPECT_THROW(Universe({"true"}), std::invalid_argument);
  EXPECT_THROW(enumerate_models(Universe({"a", "b", "c"}), 2), CapacityError);
}

TEST(Model, ModelSetAlgebra) {
  ModelSet a(3), b(3);
  a.insert(1);
  a.insert(5);
  b.insert(5);
  b.insert(7);
  EXPECT_EQ((a & b).count(), 1u);
  EXPECT_EQ((a | b).count(), 3u);
  EXPECT_EQ((~a).count(), 6u);
  EXPECT_EQ(a.minus(b).indices(), std::vector<ModelIndex>{1});
  EXPECT_TRUE(ModelSet::all(3).is_all());
  EXPECT_TRUE((a & ~a).empty());
  EXPECT_TRUE((a & b).subset_of(a));
  EXPECT_EQ(*b.first(), 5u);
  ModelSet big = ModelSet::all(7);
  EXPECT_EQ(big.count(), 128u);
  EXPECT_TRUE((~big).empty());
}
