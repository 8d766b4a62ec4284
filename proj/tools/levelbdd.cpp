// levelbdd: QBF solving, Garden-of-Eden checks and a randomized self-test
// on top of the levelized BDD engine.

#include <chrono>
#include <fstream>
#include <iostream>
#include <new>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "levelbdd/goe.hpp"
#include "levelbdd/oracle.hpp"
#include "levelbdd/qcir.hpp"
#include "levelbdd/quantify.hpp"
#include "levelbdd/storage.hpp"

using namespace levelbdd;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;
constexpr int kExitResource = 3;

struct Options {
  std::string policy = "plain";
  double epsilon = 0.5;
  unsigned delta = 2;
  bool no_bail_out = false;
  bool no_terminal_arcs = false;
  bool no_root_sorter = false;
  bool one_by_one = false;
  std::uint64_t memory = 0;
  std::string dot;
  bool stats = false;
  bool json = false;
};

void add_engine_flags(CLI::App *cmd, Options &o) {
  cmd->add_option("--policy", o.policy, "plain|prune_top|deepest|partial|repeated_partial")
      ->check(CLI::IsMember({"plain", "prune_top", "deepest", "partial", "repeated_partial"}));
  cmd->add_option("--epsilon", o.epsilon, "growth threshold of repeated_partial")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", o.delta, "pass limit of repeated_partial")->check(CLI::Range(1u, 1000u));
  cmd->add_flag("--no-bail-out", o.no_bail_out);
  cmd->add_flag("--no-terminal-arcs", o.no_terminal_arcs);
  cmd->add_flag("--no-root-sorter", o.no_root_sorter);
  cmd->add_flag("--one-by-one", o.one_by_one, "quantify one variable per sweep");
  cmd->add_option("--memory", o.memory, "sorter memory budget in bytes (0 = unbounded)");
  cmd->add_option("--dot", o.dot, "write the final BDD as Graphviz");
  cmd->add_flag("--stats", o.stats, "print key=value statistics");
  cmd->add_flag("--json", o.json, "print statistics as one JSON line");
}

QuantConfig config_of(const Options &o) {
  QuantConfig cfg;
  cfg.transposition = *parse_transposition(o.policy);
  cfg.epsilon = o.epsilon;
  cfg.delta = o.delta;
  cfg.bail_out = !o.no_bail_out;
  cfg.terminal_arcs = !o.no_terminal_arcs;
  cfg.use_root_sorter = !o.no_root_sorter;
  cfg.one_by_one = o.one_by_one;
  return cfg;
}

void apply_storage(const Options &o) {
  StorageConfig sc = storage_config();
  sc.memory_budget = o.memory;
  set_storage_config(sc);
}

void write_dot(const Options &o, const Bdd &f) {
  if (o.dot.empty())
    return;
  std::ofstream out(o.dot);
  if (!out)
    throw std::runtime_error("cannot write " + o.dot);
  out << to_dot(f);
}

void report(const Options &o, const std::string &verdict, double seconds, const Stats &st) {
  if (!o.stats && !o.json)
    return;
  nlohmann::ordered_json j;
  j["verdict"] = verdict;
  j["wall_time_s"] = seconds;
  j["peak_node_file_bytes"] = st.peak_nodes * sizeof(NodeRec);
  j["policy"] = o.policy;
  j["one_by_one"] = o.one_by_one;
  j["terminal_arcs"] = !o.no_terminal_arcs;
  j["bail_out"] = !o.no_bail_out;
  j["root_sorter"] = !o.no_root_sorter;
  j["memory"] = o.memory;
  j["requests_total"] = st.requests_total;
  j["requests_modifying"] = st.requests_modifying;
  j["requests_terminal"] = st.requests_terminal;
  j["or_requests_total"] = st.or_requests_total;
  j["inner_sweeps_invoked"] = st.inner_sweeps_invoked;
  j["inner_sweeps_skipped"] = st.inner_sweeps_skipped;
  j["gc_sweeps"] = st.gc_sweeps;
  j["arcs_pushed_outer"] = st.arcs_pushed_outer;
  j["arcs_pushed_inner"] = st.arcs_pushed_inner;
  j["transposed_arcs"] = st.transposed_arcs;
  j["transposed_nodes"] = st.transposed_nodes;
  j["peak_width"] = st.peak_width;
  j["peak_nodes"] = st.peak_nodes;
  j["sorter_runs_spilled"] = sorter_counters().runs_spilled;
  if (o.stats)
    for (auto &[k, v] : j.items())
      std::cout << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  if (o.json)
    std::cout << j.dump() << '\n';
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_qbf(const std::string &path, const Options &o) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::stringstream text;
  text << in.rdbuf();
  qcir::Circuit c = qcir::parse_qcir(text.str());
  apply_storage(o);
  auto t0 = std::chrono::steady_clock::now();
  Stats st;
  bool value = qcir::solve(c, config_of(o), &st);
  double secs = since(t0);
  std::cout << (value ? "TRUE" : "FALSE") << '\n';
  write_dot(o, make_const(value));
  report(o, value ? "TRUE" : "FALSE", secs, st);
  return value ? kExitTrue : kExitFalse;
}

int cmd_goe(int rows, int cols, const Options &o) {
  apply_storage(o);
  auto t0 = std::chrono::steady_clock::now();
  Stats st;
  goe::Grid g{rows, cols};
  goe::GoeVarMap vmap = goe::GoeVarMap::standard(g);
  Bdd rel = goe::build_transition(g, vmap);
  std::vector<Label> prev = vmap.prev_labels();
  Bdd image = exists(rel, std::set<Label>(prev.begin(), prev.end()), config_of(o), &st);
  bool found = !(image.is_const() && image.value());
  double secs = since(t0);
  std::cout << "GoE: " << (found ? "yes" : "no") << '\n';
  write_dot(o, image);
  report(o, found ? "yes" : "no", secs, st);
  return 0;
}

// Randomized comparison of every engine operation against the depth-first
// oracle.
int cmd_selftest(std::uint64_t seed, int rounds, unsigned vars) {
  std::mt19937_64 rng(seed);
  const BinOp binops[] = {ops::and_op, ops::or_op, ops::xor_op};
  const Transposition policies[] = {Transposition::plain, Transposition::prune_top,
                                    Transposition::deepest, Transposition::partial,
                                    Transposition::repeated_partial};
  int passed = 0, failed = 0;
  auto check = [&](bool ok, const char *what, int round) {
    if (ok) {
      ++passed;
    } else {
      ++failed;
      std::cerr << "selftest: " << what << " mismatch in round " << round << '\n';
    }
  };
  for (int round = 0; round < rounds; ++round) {
    oracle::Manager m;
    auto fr = oracle::random_function(m, rng, vars, 2 + round % 12);
    auto gr = oracle::random_function(m, rng, vars, 2 + round % 7);
    Bdd f = m.to_bdd(fr), g = m.to_bdd(gr);
    const BinOp &op = binops[round % 3];
    check(apply(f, g, op) == m.to_bdd(m.df_apply(fr, gr, op)), "apply", round);
    check(bdd_not(f) == m.to_bdd(m.df_not(fr)), "not", round);

    std::set<Label> x;
    std::uniform_int_distribution<Label> pick(0, vars - 1);
    for (int k = round % 5; k > 0; --k)
      x.insert(pick(rng));
    if (!x.empty()) {
      Label i = *x.begin();
      check(quantify_single(f, i) == m.to_bdd(m.df_exists(fr, {i})), "quantify_single", round);
    }
    QuantConfig cfg;
    cfg.transposition = policies[round % 5];
    cfg.terminal_arcs = round & 1;
    cfg.bail_out = round & 2;
    cfg.use_root_sorter = round & 4;
    cfg.one_by_one = round & 8;
    check(exists(f, x, cfg) == m.to_bdd(m.df_exists(fr, x)), "exists", round);
    check(forall(f, x, cfg) == m.to_bdd(m.df_forall(fr, x)), "forall", round);
  }
  std::cout << "selftest: " << passed << " passed, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"levelbdd: levelized BDD engine with nested-sweeping quantification"};
  app.require_subcommand(1);

  Options o;
  std::string path;
  auto *qbf = app.add_subcommand("qbf", "solve a QCIR-G14 file; exit 0 on TRUE, 1 on FALSE");
  qbf->add_option("file", path, "QCIR file")->required();
  add_engine_flags(qbf, o);

  int rows = 0, cols = 0;
  auto *goe = app.add_subcommand("goe", "check for a Garden of Eden on a rows x cols board");
  goe->add_option("rows", rows)->required()->check(CLI::Range(1, 16));
  goe->add_option("cols", cols)->required()->check(CLI::Range(1, 16));
  add_engine_flags(goe, o);

  std::uint64_t seed = 1;
  int rounds = 500;
  unsigned vars = 8;
  auto *self = app.add_subcommand("selftest", "compare the engine with the reference oracle");
  self->add_option("--seed", seed);
  self->add_option("--rounds", rounds)->check(CLI::Range(1, 1000000));
  self->add_option("--vars", vars)->check(CLI::Range(1u, 14u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*qbf)
      return cmd_qbf(path, o);
    if (*goe)
      return cmd_goe(rows, cols, o);
    return cmd_selftest(seed, rounds, vars);
  } catch (const ResourceLimit &e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc &) {
    std::cerr << "resource limit: out of memory\n";
    return kExitResource;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
