#include "levelbdd/nested.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <queue>

#include "levelbdd/detail/reduce.hpp"
#include "levelbdd/detail/single.hpp"
#include "levelbdd/detail/topdown.hpp"

namespace levelbdd {

NestedTargets nested_targets(Uid low, Uid high, const BinOp &op) {
  NestedTargets out;
  if (auto t = op.shortcut(low, high)) {
    out.t0 = *t;
    out.killed_sibling = low.is_node() || high.is_node();
    return out;
  }
  if (low == high || (high.is_terminal() && op.neutral(high.value()))) {
    out.t0 = low;
  } else if (low.is_terminal() && op.neutral(low.value())) {
    out.t0 = high;
  } else {
    out.t0 = std::min(low, high);
    out.t1 = std::max(low, high);
  }
  return out;
}

Route route_arc(Label source, Uid target, std::optional<Label> boundary, bool terminal_arcs) {
  if (target.is_terminal() && terminal_arcs)
    return Route::outer_up;
  if (!boundary || source >= *boundary)
    return Route::outer_up;
  return Route::root_requests;
}

BailOut try_bail_out(bool enabled, bool all_preserving, bool dirty, bool shallowest) {
  if (!enabled || !all_preserving)
    return BailOut::must_run_op;
  if (dirty && shallowest)
    return BailOut::must_run_gc;
  return BailOut::skipped;
}

namespace {

using detail::Request;
using detail::SweepOutput;

// Mark-and-copy of the sub-DAG reachable from the requests' targets, in a
// single pass over the uid-sorted file.
SweepOutput gc_copy(const std::vector<Request> &roots, std::span<const NodeRec> deep) {
  struct Mark {
    Uid target;
    Uid parent;
    bool is_high;
    bool outer;
  };
  struct MarkOrder {
    bool operator()(const Mark &a, const Mark &b) const noexcept {
      if (a.target != b.target)
        return b.target < a.target;
      if (a.parent != b.parent)
        return b.parent < a.parent;
      return b.is_high < a.is_high;
    }
  };
  SweepOutput out;
  auto emit = [&](const Mark &m, Uid target) {
    if (m.parent == Uid::no_parent()) {
      out.arcs.root = target;
      return;
    }
    ArcRec arc{m.parent, m.is_high, target};
    if (m.outer)
      (target.is_terminal() ? out.outer_terminal : out.outer_internal).push_back(arc);
    else
      (target.is_terminal() ? out.arcs.terminal : out.arcs.internal).push_back(arc);
  };

  std::priority_queue<Mark, std::vector<Mark>, MarkOrder> marks;
  for (const Request &r : roots) {
    Mark m{r.t0, r.parent, r.is_high, r.outer};
    if (r.t0.is_terminal())
      emit(m, r.t0);
    else
      marks.push(m);
  }
  for (const NodeRec &n : deep) {
    if (marks.empty())
      break;
    if (marks.top().target < n.uid)
      throw EngineError("gc root " + to_string(marks.top().target) + " not in file");
    if (marks.top().target != n.uid)
      continue;
    if (out.arcs.levels.empty() || out.arcs.levels.back().label != n.uid.label())
      out.arcs.levels.push_back({n.uid.label(), 0});
    Uid copy = Uid::node(n.uid.label(), out.arcs.levels.back().count++);
    while (!marks.empty() && marks.top().target == n.uid) {
      emit(marks.top(), copy);
      marks.pop();
    }
    for (bool hi : {false, true}) {
      Mark m{hi ? n.high : n.low, copy, hi, false};
      if (m.target.is_terminal())
        emit(m, m.target);
      else
        marks.push(m);
    }
  }
  if (!marks.empty())
    throw EngineError("gc root " + to_string(marks.top().target) + " not in file");
  out.processed = 0;
  return out;
}

class NestedSweep {
public:
  NestedSweep(const ArcFile &a, const NestingPolicy &p, Stats &stats)
      : _a(a), _p(p), _stats(stats) {
    for (Label l : p.nesting_levels)
      for (const LevelInfo &li : a.levels)
        if (li.label == l)
          _nest.push_back(l);
    std::sort(_nest.begin(), _nest.end());
    _nest.erase(std::unique(_nest.begin(), _nest.end()), _nest.end());
    new_root_list();
  }

  Bdd run() {
    detail::LevelArcCursor cursor(_a.internal, _a.terminal);
    for (auto it = _a.levels.rbegin(); it != _a.levels.rend(); ++it) {
      const Label l = it->label;
      _outer_up.setup_next_level(l);
      detail::ReducedLevel rl =
          detail::reduce_level(l, it->count, cursor.terminal_from(l), _outer_up);
      const std::optional<Label> boundary = nesting_above(l);
      const bool nest = std::binary_search(_nest.begin(), _nest.end(), l);
      if (!nest) {
        for (const ArcRec &arc : cursor.internal_into(l))
          deliver(arc.source, arc.is_high, rl.result[arc.target.id()], boundary);
        if (_a.root.label() == l)
          _root = rl.result[_a.root.id()];
        _stats.observe_size(0, rl.nodes.size());
        if (!rl.nodes.empty())
          _deep.push_back(std::move(rl.nodes));
        continue;
      }
      for (const ArcRec &arc : cursor.internal_into(l))
        case1(arc.source, arc.is_high, rl.low[arc.target.id()], rl.high[arc.target.id()]);
      if (_a.root.label() == l)
        case1(Uid::no_parent(), false, rl.low[_a.root.id()], rl.high[_a.root.id()]);
      finish_nesting_level(l, boundary);
    }

    if (!_outer_up.empty() || _root_count != 0 || _root_pending)
      throw EngineError("nested sweep left requests behind");
    if (_stats.inner_sweeps_invoked + _stats.inner_sweeps_skipped != _invoked_before + _nest.size())
      throw EngineError("nested sweep skipped a nesting level");
    if (_root.is_nil())
      throw EngineError("nested sweep lost the root");
    if (_root.is_terminal())
      return Bdd(_root.value());
    std::vector<NodeRec> nodes;
    for (auto it = _deep.rbegin(); it != _deep.rend(); ++it)
      nodes.insert(nodes.end(), it->begin(), it->end());
    Bdd out(std::move(nodes), _root);
    _stats.observe(out);
    return out;
  }

private:
  std::optional<Label> nesting_above(Label l) const {
    auto it = std::lower_bound(_nest.begin(), _nest.end(), l);
    if (it == _nest.begin())
      return std::nullopt;
    return *std::prev(it);
  }

  void new_root_list() {
    if (_p.use_root_sorter)
      _root_sorter = std::make_unique<detail::RequestSorter>();
    _root_count = 0;
    _root_pairs = 0;
  }

  void push_root(const Request &r) {
    ++_root_count;
    if (r.arity() == 2)
      ++_root_pairs;
    if (r.parent == Uid::no_parent())
      _root_pending = true;
    if (_p.use_root_sorter)
      _root_sorter->push(r);
    else
      _root_pq.push(r);
  }

  std::vector<Request> drain_roots() {
    std::vector<Request> out;
    if (_p.use_root_sorter) {
      _root_sorter->finalize();
      out = _root_sorter->drain();
    } else {
      while (_root_pq.setup_next_level())
        while (_root_pq.can_pull())
          out.push_back(_root_pq.pull());
      _root_pq.reset();
    }
    _root_pending = false;
    new_root_list();
    return out;
  }

  // Resolved arc s -> target while `boundary` is the next pending nesting
  // level above.
  void deliver(Uid s, bool is_high, Uid target, std::optional<Label> boundary) {
    if (s == Uid::no_parent()) {
      _root = target;
      return;
    }
    if (route_arc(s.label(), target, boundary, _p.terminal_arcs) == Route::outer_up) {
      ++_stats.arcs_pushed_outer;
      _outer_up.push({s, is_high, target});
    } else {
      push_root(Request{target, Uid::nil(), s, is_high, true});
    }
  }

  void case1(Uid s, bool is_high, Uid low, Uid high) {
    NestedTargets t = nested_targets(low, high, _p.op);
    _dirty = _dirty || t.killed_sibling;
    if (t.is_terminal() && _p.terminal_arcs)
      deliver(s, is_high, t.t0, std::nullopt);
    else
      push_root(Request{t.t0, t.t1, s, is_high, true});
  }

  void finish_nesting_level(Label xj, std::optional<Label> xi) {
    BailOut b = try_bail_out(_p.bail_out, _root_pairs == 0, _dirty, !xi.has_value());
    if (b == BailOut::skipped) {
      ++_stats.inner_sweeps_skipped;
      for (const Request &r : drain_roots())
        deliver(r.parent, r.is_high, r.t0, xi);
      return;
    }
    ++_stats.inner_sweeps_invoked;
    std::vector<NodeRec> file;
    for (auto it = _deep.rbegin(); it != _deep.rend(); ++it)
      file.insert(file.end(), it->begin(), it->end());
    _deep.clear();

    const bool had_root = _root_pending;
    SweepOutput out;
    if (b == BailOut::must_run_gc) {
      ++_stats.gc_sweeps;
      out = gc_copy(drain_roots(), file);
    } else {
      detail::SingleFilePolicy policy(_p.op);
      detail::TopDownSweep sweep(policy, file, file, _p.use_root_sorter ? nullptr : &_root_pq);
      out = sweep.run(_p.use_root_sorter ? _root_sorter.get() : nullptr);
      if (!_p.use_root_sorter)
        _root_pq.reset();
      _root_pending = false;
      new_root_list();
      _stats.or_requests_total += out.processed;
      _stats.requests_total += out.pushed;
      _stats.requests_modifying += out.pushed_pairs;
      _stats.requests_terminal += out.terminal_results;
    }
    _dirty = false;
    _stats.observe_size(out.arcs.node_count(), 0);
    inner_reduce(out, xj, xi, had_root);
  }

  void inner_reduce(SweepOutput &out, Label xj, std::optional<Label> xi, bool had_root) {
    detail::ForwardPQ inner_up;
    detail::LevelArcCursor inner(out.arcs.internal, out.arcs.terminal);
    detail::LevelArcCursor outer(out.outer_internal, {});
    for (auto it = out.arcs.levels.rbegin(); it != out.arcs.levels.rend(); ++it) {
      const Label l = it->label;
      inner_up.setup_next_level(l);
      detail::ReducedLevel rl = detail::reduce_level(l, it->count, inner.terminal_from(l), inner_up);
      for (const ArcRec &arc : inner.internal_into(l)) {
        ++_stats.arcs_pushed_inner;
        inner_up.push({arc.source, arc.is_high, rl.result[arc.target.id()]});
      }
      for (const ArcRec &arc : outer.internal_into(l)) {
        assert(arc.source.label() != xj);
        deliver(arc.source, arc.is_high, rl.result[arc.target.id()], xi);
      }
      if (had_root && out.arcs.root.is_node() && out.arcs.root.label() == l)
        _root = rl.result[out.arcs.root.id()];
      _stats.observe_size(0, rl.nodes.size());
      if (!rl.nodes.empty())
        _deep.push_back(std::move(rl.nodes));
    }
    (void)xj;
    for (const ArcRec &arc : out.outer_terminal)
      deliver(arc.source, arc.is_high, arc.target, xi);
    if (had_root && out.arcs.root.is_terminal())
      _root = out.arcs.root;
    if (!inner_up.empty())
      throw EngineError("inner reduce left arcs behind");
  }

  const ArcFile &_a;
  const NestingPolicy &_p;
  Stats &_stats;
  const std::uint64_t _invoked_before = _stats.inner_sweeps_invoked + _stats.inner_sweeps_skipped;
  std::vector<Label> _nest;
  detail::ForwardPQ _outer_up;
  detail::RequestPQ _root_pq;
  std::unique_ptr<detail::RequestSorter> _root_sorter;
  std::uint64_t _root_count = 0;
  std::uint64_t _root_pairs = 0;
  bool _root_pending = false;
  bool _dirty = false;
  // Reduced levels below the outer sweep, deepest first.
  std::vector<std::vector<NodeRec>> _deep;
  Uid _root = Uid::nil();
};

} // namespace

Bdd nested_sweep(const ArcFile &a, const NestingPolicy &policy, Stats &stats) {
  if (a.root.is_terminal())
    return Bdd(a.root.value());
  if (!policy.op.idempotent() || !policy.op.commutative())
    throw EngineError(std::string("nested sweep needs an idempotent operator, got ") +
                      policy.op.name());
  return NestedSweep(a, policy, stats).run();
}

ArcFile gc_sweep(std::span<const Uid> roots, std::span<const NodeRec> deep) {
  std::vector<Request> requests;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Uid parent = roots.size() == 1 ? Uid::no_parent() : Uid::node(0, i);
    requests.push_back(Request{roots[i], Uid::nil(), parent, false, true});
  }
  SweepOutput out = gc_copy(requests, deep);
  if (roots.size() != 1)
    out.arcs.root = Uid::nil();
  return std::move(out.arcs);
}

} // namespace levelbdd
