#include <gtest/gtest.h>

#include <set>

#include "levelbdd/goe.hpp"
#include "levelbdd/oracle.hpp"

using namespace levelbdd;
using namespace levelbdd::goe;

namespace {

// Previous board including its border, indexed [r + 1][c + 1].
using Board = std::vector<std::vector<bool>>;

bool life(const Board &b, int r, int c) {
  int n = 0;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if ((dr || dc) && b[r + 1 + dr][c + 1 + dc])
        ++n;
  return n == 3 || (n == 2 && b[r + 1][c + 1]);
}

bool holds(const Bdd &f, const std::vector<bool> &a) {
  return eval(f, [&](Label l) { return static_cast<bool>(a.at(l)); });
}

std::vector<bool> assignment(const GoeVarMap &m, const Board &prev, const Board &next) {
  std::vector<bool> a(m.label_count());
  Grid g = m.grid();
  for (int r = -1; r <= g.rows; ++r)
    for (int c = -1; c <= g.cols; ++c)
      a[m.prev(r, c)] = prev[r + 1][c + 1];
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c)
      a[m.next(r, c)] = next[r][c];
  return a;
}

TEST(VarMap, InterleavedRowMajor) {
  Grid g{2, 3};
  GoeVarMap m = GoeVarMap::standard(g);
  EXPECT_EQ(m.label_count(), 5u * 4 + 6);
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c)
      EXPECT_EQ(m.prev(r, c) + 1, m.next(r, c));
  // Top border row first, then the row's own border cells.
  EXPECT_EQ(m.prev(-1, -1), 0u);
  EXPECT_EQ(m.prev(-1, 3), 4u);
  EXPECT_EQ(m.prev(0, -1), 5u);
  EXPECT_EQ(m.prev(0, 3), 6u);
  EXPECT_EQ(m.prev(0, 0), 7u);
  EXPECT_EQ(m.prev(2, 3), m.label_count() - 1);
  std::vector<Label> all = m.prev_labels();
  auto next = m.next_labels();
  all.insert(all.end(), next.begin(), next.end());
  EXPECT_EQ(std::set<Label>(all.begin(), all.end()).size(), m.label_count());
}

TEST(Transition, TwoByTwoMatchesLifeStep) {
  Grid g{2, 2};
  GoeVarMap m = GoeVarMap::standard(g);
  Bdd rel = build_transition(g, m);
  Board prev(4, std::vector<bool>(4));
  Board next(2, std::vector<bool>(2));
  for (unsigned bits = 0; bits < (1u << 16); ++bits) {
    for (int i = 0; i < 16; ++i)
      prev[i / 4][i % 4] = (bits >> i) & 1;
    Board step(2, std::vector<bool>(2));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        step[r][c] = life(prev, r, c);
    for (unsigned nb = 0; nb < 16; ++nb) {
      for (int i = 0; i < 4; ++i)
        next[i / 2][i % 2] = (nb >> i) & 1;
      ASSERT_EQ(holds(rel, assignment(m, prev, next)), next == step) << bits << " " << nb;
    }
  }
}

TEST(Transition, BlinkerAndVacuum) {
  Grid g{3, 3};
  GoeVarMap m = GoeVarMap::standard(g);
  Bdd rel = build_transition(g, m);
  Board prev(5, std::vector<bool>(5));
  Board next(3, std::vector<bool>(3));
  EXPECT_TRUE(holds(rel, assignment(m, prev, next)));
  for (int r = 1; r <= 3; ++r)
    prev[r][2] = true;
  for (int c = 0; c < 3; ++c)
    next[1][c] = true;
  EXPECT_TRUE(holds(rel, assignment(m, prev, next)));
  next[0][0] = true;
  EXPECT_FALSE(holds(rel, assignment(m, prev, next)));
}

TEST(HasGoe, NoneUpToThreeByThree) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_FALSE(has_goe({n, n})) << n;
    QuantConfig obo;
    obo.one_by_one = true;
    EXPECT_FALSE(has_goe({n, n}, obo)) << n;
  }
  EXPECT_FALSE(has_goe({1, 3}));
  EXPECT_FALSE(has_goe({2, 3}));
}

TEST(HasGoe, OneByOneBruteForce) {
  // Both next values of the single cell have a predecessor among the 2^9
  // boards.
  std::set<bool> seen;
  Board prev(3, std::vector<bool>(3));
  for (unsigned bits = 0; bits < 512; ++bits) {
    for (int i = 0; i < 9; ++i)
      prev[i / 3][i % 3] = (bits >> i) & 1;
    seen.insert(life(prev, 0, 0));
  }
  EXPECT_EQ(seen.size(), 2u);
  EXPECT_FALSE(has_goe({1, 1}));
}

TEST(HasGoe, PartialQuantificationIsNotConstant) {
  for (int n = 2; n <= 3; ++n) {
    Grid g{n, n};
    GoeVarMap m = GoeVarMap::standard(g);
    Bdd rel = build_transition(g, m);
    auto prev = m.prev_labels();
    std::set<Label> some(prev.begin(), prev.begin() + prev.size() / 2);
    Bdd part = exists(rel, some);
    EXPECT_FALSE(part.is_const());
    if (n == 2) {
      oracle::Manager om;
      EXPECT_EQ(part, om.to_bdd(om.df_exists(om.from_bdd(rel), some)));
    }
  }
}

TEST(Symmetric, MirrorSharesNextVariables) {
  Grid g{2, 2};
  EXPECT_EQ(GoeVarMap::mirror_rows(g).next_labels().size(), 2u);
  // A single row is its own mirror image.
  Grid row{1, 3};
  EXPECT_EQ(build_transition_symmetric(row), build_transition(row, GoeVarMap::standard(row)));
}

TEST(Symmetric, ImageIsContainedInFullImage) {
  for (int n = 2; n <= 3; ++n) {
    Grid g{n, n};
    GoeVarMap full = GoeVarMap::standard(g), sym = GoeVarMap::mirror_rows(g);
    auto fp = full.prev_labels(), sp = sym.prev_labels();
    Bdd image = exists(build_transition(g, full), {fp.begin(), fp.end()});
    Bdd sym_image = exists(build_transition(g, sym), {sp.begin(), sp.end()});
    auto labels = sym.next_labels();
    for (unsigned bits = 0; bits < (1u << labels.size()); ++bits) {
      std::vector<bool> sa(sym.label_count()), fa(full.label_count());
      for (std::size_t i = 0; i < labels.size(); ++i)
        sa[labels[i]] = (bits >> i) & 1;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          fa[full.next(r, c)] = sa[sym.next(r, c)];
      if (holds(sym_image, sa)) {
        EXPECT_TRUE(holds(image, fa));
      }
    }
  }
}

} // namespace
