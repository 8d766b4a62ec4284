#include <gtest/gtest.h>

#include <random>

#include "levelbdd/oracle.hpp"
#include "levelbdd/storage.hpp"
#include "levelbdd/sweep.hpp"
#include "support.hpp"

using namespace levelbdd;

namespace {

// x0 or not x1, built by hand.
Bdd fig_example() {
  return Bdd({{Uid::node(0, 0), Uid::node(1, 0), kTrue}, {Uid::node(1, 0), kTrue, kFalse}},
             Uid::node(0, 0));
}

TEST(Apply, OrOfLiteralsMatchesHandBuilt) {
  Bdd f = apply(make_var(0), make_nvar(1), ops::or_op);
  EXPECT_EQ(f, fig_example());
  EXPECT_EQ(check_reduced(f), "");
}

TEST(Transpose, ArcsOfHandBuiltExample) {
  ArcFile a = transpose(fig_example());
  ASSERT_EQ(a.internal.size(), 1u);
  EXPECT_EQ(a.internal[0], (ArcRec{Uid::node(0, 0), false, Uid::node(1, 0)}));
  std::vector<ArcRec> term{{Uid::node(0, 0), true, kTrue},
                           {Uid::node(1, 0), false, kTrue},
                           {Uid::node(1, 0), true, kFalse}};
  EXPECT_EQ(a.terminal, term);
  EXPECT_EQ(reduce(a), fig_example());
}

TEST(Apply, ConstantsAndShortcuts) {
  Bdd x = make_var(3);
  EXPECT_EQ(apply(x, make_const(false), ops::and_op), make_const(false));
  EXPECT_EQ(apply(x, make_const(true), ops::and_op), x);
  EXPECT_EQ(apply(x, x, ops::xor_op), make_const(false));
  EXPECT_EQ(apply(x, make_nvar(3), ops::or_op), make_const(true));
  EXPECT_EQ(bdd_not(x), make_nvar(3));
}

TEST(Apply, RandomAgainstOracleBitExact) {
  std::mt19937_64 rng(7);
  const BinOp all[] = {ops::and_op, ops::or_op,  ops::xor_op, ops::xnor_op,
                       ops::nand_op, ops::nor_op, ops::imp_op, ops::diff_op};
  for (int round = 0; round < 300; ++round) {
    oracle::Manager m;
    auto fr = fixtures::random_function(m, rng, 8, 2 + round % 12);
    auto gr = fixtures::random_function(m, rng, 8, 2 + round % 9);
    const BinOp &op = all[round % 8];
    Bdd f = m.to_bdd(fr), g = m.to_bdd(gr);
    Stats st;
    Bdd h = apply(f, g, op, &st);
    ASSERT_EQ(check_reduced(h), "") << "round " << round;
    ASSERT_EQ(h, m.to_bdd(m.df_apply(fr, gr, op))) << "round " << round << " op " << op.name();
  }
}

TEST(Apply, NotAndIteAgainstOracle) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    oracle::Manager m;
    auto c = fixtures::random_function(m, rng, 7, 5);
    auto t = fixtures::random_function(m, rng, 7, 5);
    auto e = fixtures::random_function(m, rng, 7, 5);
    Bdd nc = bdd_not(m.to_bdd(c));
    ASSERT_EQ(nc, m.to_bdd(m.df_not(c)));
    auto want = m.df_apply(m.df_apply(c, t, ops::and_op),
                           m.df_apply(m.df_not(c), e, ops::and_op), ops::or_op);
    ASSERT_EQ(ite(m.to_bdd(c), m.to_bdd(t), m.to_bdd(e)), m.to_bdd(want));
  }
}

TEST(Reduce, TransposeRoundTrip) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 100; ++round) {
    oracle::Manager m;
    Bdd f = fixtures::random_bdd(m, rng, 10, 12);
    if (f.is_const())
      continue;
    ArcFile a = transpose(f);
    EXPECT_EQ(untranspose(a), std::vector<NodeRec>(f.nodes().begin(), f.nodes().end()));
    EXPECT_EQ(reduce(a), f);
  }
}

TEST(Oracle, TruthTableAndProjection) {
  std::mt19937_64 rng(5);
  auto labels = fixtures::iota_labels(6);
  for (int round = 0; round < 50; ++round) {
    oracle::Manager m;
    auto fr = fixtures::random_function(m, rng, 6, 8);
    std::set<Label> x{1, 4};
    auto want = oracle::project(oracle::truth_table(m.to_bdd(fr), labels), labels, x, false);
    EXPECT_EQ(oracle::truth_table(m.to_bdd(m.df_exists(fr, x)), labels), want);
    auto wantf = oracle::project(oracle::truth_table(m.to_bdd(fr), labels), labels, x, true);
    EXPECT_EQ(oracle::truth_table(m.to_bdd(m.df_forall(fr, x)), labels), wantf);
  }
}

} // namespace

namespace {

Bdd literal(Label v, bool positive) { return positive ? make_var(v) : make_nvar(v); }

Bdd minterm(unsigned row) {
  Bdd t = make_const(true);
  for (Label v = 0; v < 3; ++v)
    t = apply(t, literal(v, (row >> (2 - v)) & 1), ops::and_op);
  return t;
}

Bdd maxterm(unsigned row) {
  Bdd t = make_const(false);
  for (Label v = 3; v-- > 0;)
    t = apply(literal(v, !((row >> (2 - v)) & 1)), t, ops::or_op);
  return t;
}

Bdd shannon(unsigned table, Label v, unsigned prefix) {
  if (v == 3)
    return make_const((table >> prefix) & 1);
  return ite(make_var(v), shannon(table, v + 1, prefix * 2 + 1), shannon(table, v + 1, prefix * 2));
}

} // namespace

// Every construction route for the same function must produce the same file.
TEST(Canonical, AllFunctionsOfThreeVariables) {
  std::vector<Bdd> seen;
  // Row bit 2 - v holds x_v.
  const std::vector<Label> labels{2, 1, 0};
  for (unsigned table = 0; table < 256; ++table) {
    Bdd sop = make_const(false), sop_rev = make_const(false), pos = make_const(true);
    for (unsigned row = 0; row < 8; ++row) {
      if ((table >> row) & 1)
        sop = apply(sop, minterm(row), ops::or_op);
      else
        pos = apply(maxterm(row), pos, ops::and_op);
      if ((table >> (7 - row)) & 1)
        sop_rev = apply(minterm(7 - row), sop_rev, ops::or_op);
    }
    Bdd sh = shannon(table, 0, 0);
    Bdd twice = bdd_not(bdd_not(sop));
    Bdd via_xor = apply(apply(sop, make_var(1), ops::xor_op), make_var(1), ops::xor_op);
    ASSERT_EQ(check_reduced(sop), "") << table;
    EXPECT_EQ(sop, sop_rev) << table;
    EXPECT_EQ(sop, pos) << table;
    EXPECT_EQ(sop, sh) << table;
    EXPECT_EQ(sop, twice) << table;
    EXPECT_EQ(sop, via_xor) << table;
    auto tt = oracle::truth_table(sop, labels);
    for (unsigned row = 0; row < 8; ++row)
      ASSERT_EQ(tt[row], static_cast<bool>((table >> row) & 1)) << table << " row " << row;
    for (const Bdd &other : seen)
      ASSERT_FALSE(other == sop) << table;
    seen.push_back(sop);
  }
}

TEST(Oracle, SmallWorkedExamples) {
  oracle::Manager m;
  auto f = m.df_apply(m.var(0), m.nvar(1), ops::or_op);
  EXPECT_EQ(m.to_bdd(f), fig_example());
  EXPECT_EQ(m.to_bdd(m.df_exists(f, {0, 1})), make_const(true));
  EXPECT_EQ(m.to_bdd(m.df_forall(f, {0, 1})), make_const(false));
  EXPECT_EQ(m.to_bdd(m.df_exists(f, {0})), make_const(true));
  EXPECT_EQ(m.to_bdd(m.df_forall(f, {0})), make_nvar(1));
  auto tt = oracle::truth_table(make_const(false), fixtures::iota_labels(2));
  EXPECT_EQ(tt, std::vector<bool>(4, false));
}
