#include <gtest/gtest.h>

#include <random>

#include "levelbdd/nested.hpp"
#include "levelbdd/oracle.hpp"
#include "levelbdd/quantify.hpp"
#include "support.hpp"

using namespace levelbdd;

namespace {

const Transposition kAllPolicies[] = {Transposition::plain, Transposition::prune_top,
                                      Transposition::deepest, Transposition::partial,
                                      Transposition::repeated_partial};

std::set<Label> random_vars(std::mt19937_64 &rng, Label n, unsigned max_size) {
  std::set<Label> x;
  std::uniform_int_distribution<Label> pick(0, n - 1);
  std::uniform_int_distribution<unsigned> size(0, max_size);
  for (unsigned k = size(rng); k > 0; --k)
    x.insert(pick(rng));
  return x;
}

TEST(Quantify, ConstantsAndTrivialCases) {
  EXPECT_EQ(exists(make_const(true), {0, 1}), make_const(true));
  EXPECT_EQ(exists(make_const(false), {0}), make_const(false));
  Bdd x0x1 = apply(make_var(0), make_var(1), ops::and_op);
  EXPECT_EQ(exists(x0x1, {1}), make_var(0));
  EXPECT_EQ(forall(x0x1, {1}), make_const(false));
  Bdd f = apply(make_var(0), make_nvar(1), ops::or_op);
  EXPECT_EQ(quantify_single(f, 1), make_const(true));
  EXPECT_EQ(quantify_single(f, 5), f);
}

TEST(Quantify, RandomAgainstTruthTable) {
  std::mt19937_64 rng(2024);
  auto labels = fixtures::iota_labels(8);
  for (int round = 0; round < 2000; ++round) {
    oracle::Manager m;
    auto fr = fixtures::random_function(m, rng, 8, 3 + round % 10);
    Bdd f = m.to_bdd(fr);
    auto x = random_vars(rng, 8, 4);
    bool universal = round % 3 == 0;
    auto want = oracle::project(oracle::truth_table(f, labels), labels, x, universal);
    Bdd got = universal ? forall(f, x) : exists(f, x);
    ASSERT_EQ(oracle::truth_table(got, labels), want) << "round " << round;
    ASSERT_EQ(got, m.to_bdd(universal ? m.df_forall(fr, x) : m.df_exists(fr, x)));
    ASSERT_EQ(check_reduced(got), "");
  }
}

TEST(Quantify, PoliciesTogglesAndFoldAreBitIdentical) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    oracle::Manager m;
    Label n = 10 + round % 5;
    auto fr = fixtures::random_function(m, rng, n, 20 + round % 60);
    Bdd f = m.to_bdd(fr);
    auto x = random_vars(rng, n, 6);
    x.insert(round % n);
    Bdd want = m.to_bdd(m.df_exists(fr, x));
    for (Transposition t : kAllPolicies)
      for (int mask = 0; mask < 8; ++mask)
        for (bool fold : {false, true}) {
          QuantConfig cfg;
          cfg.transposition = t;
          cfg.terminal_arcs = mask & 1;
          cfg.bail_out = mask & 2;
          cfg.use_root_sorter = mask & 4;
          cfg.one_by_one = fold;
          Stats st;
          ASSERT_EQ(exists(f, x, cfg, &st), want)
              << "round " << round << " policy " << to_string(t) << " mask " << mask;
          ASSERT_LE(st.requests_modifying, st.requests_total);
          ASSERT_LE(st.requests_terminal, st.requests_total);
        }
  }
}

TEST(Nested, StatsIdentityAndSingleLevel) {
  // x0 xor x1: one nesting level at x1 turns every x1 node into or(low, high).
  Bdd f = apply(make_var(0), make_var(1), ops::xor_op);
  Stats st;
  NestingPolicy p;
  p.nesting_levels = {1};
  EXPECT_EQ(nested_sweep(transpose(f), p, st), make_const(true));
  EXPECT_EQ(st.inner_sweeps_invoked + st.inner_sweeps_skipped, 1u);
}

TEST(Nested, AbsorbingShortcutCollapses) {
  // Every x0 node has a true child: the or of its children is true.
  Bdd f = apply(make_var(0), make_var(1), ops::or_op);
  Stats st;
  NestingPolicy p;
  p.nesting_levels = {0};
  EXPECT_EQ(nested_sweep(transpose(f), p, st), make_const(true));
}

TEST(Nested, GcRunsWhenShallowestIsSkippedAfterShortcut) {
  // x1 ? (x2 | x3) : true under exists x1 at the shallowest level gives true
  // only through the shortcut; with a live parent above it the copy must
  // drop the dead x2/x3 subtree.
  oracle::Manager m;
  auto sub = m.df_apply(m.var(2), m.var(3), ops::and_op);
  auto g = m.make(1, m.terminal(true), sub);
  auto f = m.make(0, sub, g);
  Bdd fb = m.to_bdd(f);
  Stats st;
  Bdd got = exists(fb, {1}, {}, &st);
  EXPECT_EQ(got, m.to_bdd(m.df_exists(f, {1})));
  EXPECT_EQ(check_reduced(got), "");
}

TEST(Nested, InvokedPlusSkippedEqualsLevels) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 200; ++round) {
    oracle::Manager m;
    Bdd f = fixtures::random_bdd(m, rng, 9, 12);
    if (f.is_const())
      continue;
    auto x = random_vars(rng, 9, 6);
    std::vector<Label> present;
    for (Label l : var_levels(f))
      if (x.contains(l))
        present.push_back(l);
    NestingPolicy p;
    p.nesting_levels = present;
    p.bail_out = round % 2;
    Stats st;
    Bdd got = nested_sweep(transpose(f), p, st);
    ASSERT_EQ(st.inner_sweeps_invoked + st.inner_sweeps_skipped, present.size());
    ASSERT_LE(st.gc_sweeps, st.inner_sweeps_invoked);
    ASSERT_EQ(got, exists(f, x, {.one_by_one = true}));
  }
}

TEST(Gc, DropsUnreachableSubtree) {
  Bdd a = apply(make_var(2), make_var(3), ops::and_op);
  Bdd b = apply(make_var(4), make_var(5), ops::xor_op);
  // Two disjoint subtrees in one file, only `a` is a root.
  std::vector<NodeRec> file(a.nodes().begin(), a.nodes().end());
  file.insert(file.end(), b.nodes().begin(), b.nodes().end());
  std::vector<Uid> roots{a.root()};
  ArcFile out = gc_sweep(roots, file);
  EXPECT_EQ(out.node_count(), node_count(a));
  EXPECT_EQ(reduce(out), a);
  std::vector<Uid> both{a.root(), b.root()};
  EXPECT_EQ(gc_sweep(both, file).node_count(), file.size());
}

TEST(Transpositions, PruneTopAndPartial) {
  // x0 ? x1 : true, quantified over x0: the x0 node has a true child.
  Bdd f = ite(make_var(0), make_var(1), make_const(true));
  Transposed t = transpose_prune_top(f, {0});
  EXPECT_TRUE(t.arcs.root == kTrue);
  // x0 ? x1 : false skips to x1.
  Bdd g = apply(make_var(0), make_var(1), ops::and_op);
  EXPECT_EQ(reduce(transpose_prune_top(g, {0}).arcs), make_var(1));
  // No quantified level: identical to plain transpose.
  EXPECT_EQ(transpose_prune_top(g, {7}).arcs, transpose(g));
  EXPECT_EQ(transpose_repeated_partial(g, {0, 1}, 0.5, 1).arcs, transpose_partial(g, {0, 1}).arcs);
}

TEST(Transpositions, PartialProductBound) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 200; ++round) {
    oracle::Manager m;
    Bdd f = fixtures::random_bdd(m, rng, 9, 14);
    auto x = random_vars(rng, 9, 5);
    auto n = node_count(f);
    EXPECT_LE(transpose_partial(f, x).arcs.node_count(), n * n + 1);
  }
}

} // namespace
