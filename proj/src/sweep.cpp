#include "levelbdd/sweep.hpp"

#include <algorithm>
#include <tuple>

#include "levelbdd/detail/reduce.hpp"
#include "levelbdd/detail/topdown.hpp"

namespace levelbdd {

namespace detail {

ReducedLevel reduce_level(Label level, std::uint64_t count, std::span<const ArcRec> terminal_arcs,
                          ForwardPQ &pq) {
  ReducedLevel out;
  out.label = level;
  out.low.assign(count, Uid::nil());
  out.high.assign(count, Uid::nil());

  auto assign = [&](Uid source, bool is_high, Uid target) {
    if (source.label() != level || source.id() >= count)
      throw EngineError("arc source " + to_string(source) + " outside level " +
                        std::to_string(level));
    Uid &slot = is_high ? out.high[source.id()] : out.low[source.id()];
    if (!slot.is_nil())
      throw EngineError("node " + to_string(source) + " has two " +
                        (is_high ? "high" : "low") + " arcs");
    slot = target;
  };
  for (const ArcRec &arc : terminal_arcs)
    assign(arc.source, arc.is_high, arc.target);
  while (pq.can_pull()) {
    Forward f = pq.pull();
    assign(f.source, f.is_high, f.target);
  }

  out.result.assign(count, Uid::nil());
  std::vector<std::tuple<Uid, Uid, std::uint64_t>> keep;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (out.low[i].is_nil() || out.high[i].is_nil())
      throw EngineError("node " + to_string(Uid::node(level, i)) + " lacks a child");
    if (out.low[i] == out.high[i])
      out.result[i] = out.low[i];
    else
      keep.emplace_back(out.low[i], out.high[i], i);
  }
  std::sort(keep.begin(), keep.end());
  std::uint64_t next_id = 0;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    auto [lo, hi, i] = keep[k];
    if (k == 0 || std::get<0>(keep[k - 1]) != lo || std::get<1>(keep[k - 1]) != hi) {
      out.nodes.push_back({Uid::node(level, next_id++), lo, hi});
    }
    out.result[i] = out.nodes.back().uid;
  }
  return out;
}

std::span<const ArcRec> LevelArcCursor::terminal_from(Label level) {
  std::size_t end = _term_end;
  while (_term_end > 0 && _terminal[_term_end - 1].source.label() == level)
    --_term_end;
  if (_term_end > 0 && _terminal[_term_end - 1].source.label() > level)
    throw EngineError("terminal arcs are not sorted by source");
  return _terminal.subspan(_term_end, end - _term_end);
}

std::span<const ArcRec> LevelArcCursor::internal_into(Label level) {
  std::size_t end = _int_end;
  while (_int_end > 0 && _internal[_int_end - 1].target.label() == level)
    --_int_end;
  if (_int_end > 0 && _internal[_int_end - 1].target.label() > level)
    throw EngineError("internal arcs are not sorted by target");
  return _internal.subspan(_int_end, end - _int_end);
}

namespace {

class BinaryApplyPolicy {
public:
  explicit BinaryApplyPolicy(const BinOp &op) : _op(op) {}

  Expansion expand(Label, const Request &, const Contents &c) const {
    return {true, child(c.low[0], c.low[1]), child(c.high[0], c.high[1])};
  }
  Uid resolve_terminal(const Request &r) const { return *_op.shortcut(r.t0, r.t1); }

private:
  Child child(Uid a, Uid b) const {
    if (auto t = _op.shortcut(a, b))
      return Child{*t};
    return Child{a, b};
  }
  BinOp _op;
};

} // namespace
} // namespace detail

ArcFile apply_unreduced(const Bdd &f, const Bdd &g, const BinOp &op, Stats *stats) {
  if (auto t = op.shortcut(f.root(), g.root())) {
    ArcFile out;
    out.root = *t;
    return out;
  }
  detail::BinaryApplyPolicy policy(op);
  detail::TopDownSweep sweep(policy, f.nodes(), g.nodes());
  sweep.push(detail::Request{f.root(), g.root()});
  detail::SweepOutput out = sweep.run();
  if (stats) {
    stats->requests_total += out.pushed;
    stats->requests_modifying += out.pushed_pairs;
    stats->requests_terminal += out.terminal_results;
  }
  return std::move(out.arcs);
}

Bdd reduce(const ArcFile &a, Stats *stats) {
  if (a.root.is_terminal())
    return Bdd(a.root.value());
  detail::ForwardPQ pq;
  detail::LevelArcCursor cursor(a.internal, a.terminal);
  std::vector<std::vector<NodeRec>> levels;
  Uid root = Uid::nil();
  for (auto it = a.levels.rbegin(); it != a.levels.rend(); ++it) {
    pq.setup_next_level(it->label);
    detail::ReducedLevel rl =
        detail::reduce_level(it->label, it->count, cursor.terminal_from(it->label), pq);
    for (const ArcRec &arc : cursor.internal_into(it->label))
      pq.push({arc.source, arc.is_high, rl.result[arc.target.id()]});
    if (it->label == a.root.label())
      root = rl.result[a.root.id()];
    if (stats)
      stats->observe_size(0, rl.nodes.size());
    if (!rl.nodes.empty())
      levels.push_back(std::move(rl.nodes));
  }
  if (!pq.empty() || root.is_nil())
    throw EngineError("arc file is not a well-formed transposed OBDD");
  if (root.is_terminal())
    return Bdd(root.value());
  std::vector<NodeRec> nodes;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    nodes.insert(nodes.end(), it->begin(), it->end());
  Bdd out(std::move(nodes), root);
  if (stats)
    stats->observe(out);
  return out;
}

Bdd apply(const Bdd &f, const Bdd &g, const BinOp &op, Stats *stats) {
  if (auto t = op.shortcut(f.root(), g.root()))
    return Bdd(t->value());
  if (f.is_const() && op.neutral(f.value()))
    return g;
  if (g.is_const() && op.neutral(g.value()))
    return f;
  return reduce(apply_unreduced(f, g, op, stats), stats);
}

Bdd bdd_not(const Bdd &f) {
  if (f.is_const())
    return Bdd(!f.value());
  // Swapping terminals changes the (low, high) order within levels, so the
  // copy is passed through Reduce to renumber it canonically.
  ArcFile a = transpose(f);
  for (ArcRec &arc : a.terminal)
    arc.target = Uid::terminal(!arc.target.value());
  return reduce(a);
}

Bdd ite(const Bdd &c, const Bdd &t, const Bdd &e) {
  return apply(apply(c, t, ops::and_op), apply(e, c, ops::diff_op), ops::or_op);
}

} // namespace levelbdd
