#include "levelbdd/quantify.hpp"

#include <algorithm>
#include <array>

#include "levelbdd/detail/single.hpp"
#include "levelbdd/detail/topdown.hpp"

namespace levelbdd {

namespace {

constexpr std::array<std::pair<Transposition, std::string_view>, 5> kNames{{
    {Transposition::plain, "plain"},
    {Transposition::prune_top, "prune_top"},
    {Transposition::deepest, "deepest"},
    {Transposition::partial, "partial"},
    {Transposition::repeated_partial, "repeated_partial"},
}};

std::set<Label> present(const std::set<Label> &vars, const std::vector<LevelInfo> &levels) {
  std::set<Label> out;
  for (const LevelInfo &li : levels)
    if (vars.contains(li.label))
      out.insert(li.label);
  return out;
}

// One single-file sweep from the root of `nodes`.
ArcFile sweep_from(std::span<const NodeRec> nodes, Uid root, detail::SingleFilePolicy &policy,
                   Stats *stats) {
  if (root.is_terminal()) {
    ArcFile out;
    out.root = root;
    return out;
  }
  detail::TopDownSweep sweep(policy, nodes, nodes);
  sweep.push(detail::Request{root});
  detail::SweepOutput out = sweep.run();
  if (stats) {
    stats->or_requests_total += out.processed;
    stats->requests_total += out.pushed;
    stats->requests_modifying += out.pushed_pairs;
    stats->requests_terminal += out.terminal_results;
    stats->observe_size(out.arcs.node_count(), 0);
  }
  return std::move(out.arcs);
}

Transposed partial_pass(std::span<const NodeRec> nodes, Uid root, const std::set<Label> &vars,
                        const BinOp &op, Stats *stats) {
  detail::SingleFilePolicy policy(op, vars, detail::QuantMode::partial);
  Transposed t;
  t.arcs = sweep_from(nodes, root, policy, stats);
  t.remaining = present(policy.created(), t.arcs.levels);
  return t;
}

Bdd quantify(const Bdd &f, const std::set<Label> &vars, const QuantConfig &cfg, const BinOp &op,
             Stats *stats) {
  if (f.is_const())
    return f;
  std::set<Label> xf;
  for (Label l : var_levels(f))
    if (vars.contains(l))
      xf.insert(l);
  if (xf.empty())
    return f;

  if (cfg.one_by_one) {
    Bdd g = f;
    for (auto it = xf.rbegin(); it != xf.rend() && !g.is_const(); ++it)
      g = quantify_single(g, *it, op, stats);
    return g;
  }

  Transposed t;
  switch (cfg.transposition) {
  case Transposition::plain:
    t.arcs = transpose(f);
    t.remaining = xf;
    if (stats) {
      stats->transposed_arcs += t.arcs.arc_count();
      stats->transposed_nodes += t.arcs.node_count();
    }
    break;
  case Transposition::prune_top:
    t = transpose_prune_top(f, xf, op, stats);
    break;
  case Transposition::deepest:
    t = transpose_deepest(f, xf, op, stats);
    break;
  case Transposition::partial:
    t = transpose_partial(f, xf, op, stats);
    break;
  case Transposition::repeated_partial:
    t = transpose_repeated_partial(f, xf, cfg.epsilon, cfg.delta, op, stats);
    break;
  }
  if (t.arcs.root.is_terminal())
    return Bdd(t.arcs.root.value());

  NestingPolicy np;
  np.nesting_levels.assign(t.remaining.begin(), t.remaining.end());
  np.op = op;
  np.terminal_arcs = cfg.terminal_arcs;
  np.bail_out = cfg.bail_out;
  np.use_root_sorter = cfg.use_root_sorter;
  Stats local;
  return nested_sweep(t.arcs, np, stats ? *stats : local);
}

} // namespace

std::string_view to_string(Transposition t) noexcept {
  for (auto [k, name] : kNames)
    if (k == t)
      return name;
  return "?";
}

std::optional<Transposition> parse_transposition(std::string_view s) noexcept {
  for (auto [k, name] : kNames)
    if (name == s)
      return k;
  return std::nullopt;
}

Bdd exists(const Bdd &f, const std::set<Label> &vars, const QuantConfig &cfg, Stats *stats) {
  return quantify(f, vars, cfg, ops::or_op, stats);
}

Bdd forall(const Bdd &f, const std::set<Label> &vars, const QuantConfig &cfg, Stats *stats) {
  return quantify(f, vars, cfg, ops::and_op, stats);
}

Bdd quantify_single(const Bdd &f, Label i, const BinOp &op, Stats *stats) {
  if (f.is_const() || !present({i}, f.levels()).contains(i))
    return f;
  detail::SingleFilePolicy policy(op, {i});
  return reduce(sweep_from(f.nodes(), f.root(), policy, stats), stats);
}

Transposed transpose_prune_top(const Bdd &f, const std::set<Label> &vars, const BinOp &op,
                               Stats *stats) {
  if (f.is_const()) {
    Transposed t;
    t.arcs.root = f.root();
    return t;
  }
  detail::SingleFilePolicy policy(op, {}, detail::QuantMode::resolve, present(vars, f.levels()));
  Transposed t;
  t.arcs = sweep_from(f.nodes(), f.root(), policy, stats);
  t.remaining = present(vars, t.arcs.levels);
  return t;
}

Transposed transpose_partial(const Bdd &f, const std::set<Label> &vars, const BinOp &op,
                             Stats *stats) {
  return partial_pass(f.nodes(), f.root(), present(vars, f.levels()), op, stats);
}

Transposed transpose_deepest(const Bdd &f, const std::set<Label> &vars, const BinOp &op,
                             Stats *stats) {
  std::set<Label> xf = present(vars, f.levels());
  if (xf.empty())
    throw EngineError("transpose_deepest: no quantified variable in the input");
  Label deepest = *xf.rbegin();
  detail::SingleFilePolicy policy(op, {deepest});
  Transposed t;
  t.arcs = sweep_from(f.nodes(), f.root(), policy, stats);
  xf.erase(deepest);
  t.remaining = present(xf, t.arcs.levels);
  return t;
}

Transposed transpose_repeated_partial(const Bdd &f, const std::set<Label> &vars, double epsilon,
                                      unsigned delta, const BinOp &op, Stats *stats) {
  if (!(epsilon > 0) || delta < 1)
    throw EngineError("repeated partial quantification needs epsilon > 0 and delta >= 1");
  const double limit = (1 + epsilon) * static_cast<double>(node_count(f));
  Transposed t = transpose_partial(f, vars, op, stats);
  for (unsigned pass = 1; pass < delta; ++pass) {
    if (t.remaining.empty() || t.arcs.root.is_terminal() ||
        static_cast<double>(t.arcs.node_count()) > limit)
      break;
    // Untransposing only needs the arcs sorted by source again.
    std::vector<NodeRec> nodes = untranspose(t.arcs);
    t = partial_pass(nodes, t.arcs.root, t.remaining, op, stats);
  }
  return t;
}

} // namespace levelbdd
