#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "levelbdd/qcir.hpp"
#include "qbf_reference.hpp"

using namespace levelbdd;
using namespace levelbdd::qcir;
using levelbdd::fixtures::brute_force;
using levelbdd::fixtures::random_qcir;

namespace {

std::string slurp(const std::string &name) {
  std::ifstream in(std::string(QCIR_DATA_DIR) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Parse, SimpleFile) {
  Circuit c = parse_qcir(slurp("simple.qcir"));
  ASSERT_EQ(c.prenex.size(), 1u);
  EXPECT_EQ(c.prenex[0], (Block{Quant::exists, {"1", "2"}}));
  ASSERT_EQ(c.gates.size(), 1u);
  EXPECT_EQ(c.gates[0], (Gate{"g", GateKind::and_gate, {{"1", false}, {"2", true}}}));
  EXPECT_EQ(c.output, (Lit{"g", false}));
  EXPECT_TRUE(solve(c));
}

TEST(Parse, CaseInsensitiveWithComments) {
  Circuit c = parse_qcir(slurp("mixed_case.qcir"));
  std::vector<Block> want{{Quant::forall, {"x"}}, {Quant::exists, {"y", "z"}}};
  EXPECT_EQ(c.prenex, want);
  EXPECT_EQ(c.output, (Lit{"top", true}));
  ASSERT_EQ(c.gates.size(), 3u);
  EXPECT_EQ(c.gates[1], (Gate{"t2", GateKind::xor_gate, {{"y", false}, {"z", false}}}));
  EXPECT_EQ(c.gates[2],
            (Gate{"top", GateKind::ite_gate, {{"t1", false}, {"t2", false}, {"x", true}}}));
  EXPECT_EQ(solve(c), brute_force(c));
}

TEST(Parse, EmptyGates) {
  Circuit c = parse_qcir(slurp("empty_gates.qcir"));
  EXPECT_TRUE(c.gates[0].args.empty());
  EXPECT_FALSE(solve(c));
  c.output = {"h", false};
  EXPECT_TRUE(solve(c));
}

TEST(Parse, ForwardReferenceAndVerdicts) {
  EXPECT_TRUE(solve(parse_qcir(slurp("forward_ref.qcir"))));
  EXPECT_TRUE(solve(parse_qcir(slurp("tautology.qcir"))));
  EXPECT_FALSE(solve(parse_qcir(slurp("unsat.qcir"))));
}

int error_line(const std::string &text) {
  try {
    parse_qcir(text);
  } catch (const ParseError &e) {
    return e.line();
  }
  return -1;
}

TEST(Parse, Errors) {
  EXPECT_EQ(error_line("exists(1)\noutput(g)\ng = and(1, 2)\n"), 3);       // free variable
  EXPECT_EQ(error_line("output(a)\na = and(b)\nb = or(a)\n"), 2);          // cycle
  EXPECT_EQ(error_line("exists(1)\noutput(g)\ng = nand(1)\n"), 3);         // unknown gate
  EXPECT_EQ(error_line("exists(1)\noutput(g)\ng = exists(1; 1)\n"), 3);    // non-prenex
  EXPECT_EQ(error_line("exists(1)\nexists(1)\noutput(1)\n"), 2);           // bound twice
  EXPECT_EQ(error_line("exists(1)\noutput(g)\ng = xor(1)\n"), 3);          // arity
  EXPECT_EQ(error_line("exists(1)\noutput(g\n"), 2);                       // syntax
  EXPECT_EQ(error_line("exists(1)\n"), 0);                                 // no output
  EXPECT_EQ(error_line("free(1)\noutput(1)\n"), 1);
}

TEST(VarOrder, DepthFirstLeftToRight) {
  Circuit c = parse_qcir("exists(1, 2)\noutput(g)\ng = and(2, 1)\n");
  auto o = dfs_var_order(c);
  EXPECT_EQ(o.at("2"), 0u);
  EXPECT_EQ(o.at("1"), 1u);
  Circuit d = parse_qcir("exists(1, 2, 3, 4)\noutput(g2)\ng2 = or(g1, 3)\ng1 = and(1, 2)\n");
  auto p = dfs_var_order(d);
  EXPECT_EQ(p.at("1"), 0u);
  EXPECT_EQ(p.at("2"), 1u);
  EXPECT_EQ(p.at("3"), 2u);
  EXPECT_EQ(p.at("4"), 3u); // prenex only
}

TEST(MergeBlocks, AdjacentSameQuantifier) {
  std::vector<Block> in{{Quant::exists, {"1"}}, {Quant::exists, {"2"}}, {Quant::forall, {"3"}}};
  std::vector<Block> want{{Quant::exists, {"1", "2"}}, {Quant::forall, {"3"}}};
  EXPECT_EQ(merge_blocks(in), want);
  EXPECT_TRUE(merge_blocks({}).empty());
  std::vector<Block> alt{{Quant::exists, {"1"}}, {Quant::forall, {"2"}}, {Quant::exists, {"3"}}};
  EXPECT_EQ(merge_blocks(alt), alt);
}

TEST(Solve, RandomAgainstBruteForce) {
  std::mt19937_64 rng(12);
  const Transposition policies[] = {Transposition::plain, Transposition::prune_top,
                                    Transposition::deepest, Transposition::partial,
                                    Transposition::repeated_partial};
  for (int round = 0; round < 500; ++round) {
    int nvars = 1 + round % 12;
    int ngates = 1 + (round * 7) % 20;
    std::string text = random_qcir(rng, nvars, ngates);
    Circuit c = parse_qcir(text);
    bool want = brute_force(c);
    QuantConfig cfg;
    cfg.transposition = policies[round % 5];
    cfg.one_by_one = round % 7 == 0;
    ASSERT_EQ(solve(c, cfg), want) << text;
    Circuit merged = c;
    merged.prenex = merge_blocks(c.prenex);
    ASSERT_EQ(brute_force(merged), want);
  }
}

} // namespace
