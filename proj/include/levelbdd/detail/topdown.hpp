/// @file  topdown.hpp
/// @brief Generic time-forward top-down request sweep shared by Apply, the
///        quantification transpositions and the inner Apply of nested
///        sweeping.

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/levelpq.hpp"
#include "levelbdd/storage.hpp"

namespace levelbdd::detail {

/// A pending recursion: 1-2 targets and the arc waiting for its result.
///
/// For two-input products the targets are positional (t0 in the first file,
/// t1 in the second). For single-file products they are sorted and t1 is
/// nil for a 1-target request.
struct Request {
  Uid t0;
  Uid t1 = Uid::nil();
  Uid parent = Uid::no_parent();
  bool is_high = false;
  /// Parent belongs to the outer sweep.
  bool outer = false;

  Uid key() const noexcept { return std::min(t0, t1); }
  Uid other() const noexcept { return std::max(t0, t1); }
  bool same_targets(const Request &r) const noexcept { return t0 == r.t0 && t1 == r.t1; }
  unsigned arity() const noexcept { return t1.is_nil() ? 1u : 2u; }
};

struct RequestOrder {
  bool operator()(const Request &a, const Request &b) const noexcept {
    if (a.key() != b.key())
      return a.key() < b.key();
    if (a.other() != b.other())
      return a.other() < b.other();
    if (a.t0 != b.t0)
      return a.t0 < b.t0;
    if (a.parent != b.parent)
      return a.parent < b.parent;
    if (a.is_high != b.is_high)
      return a.is_high < b.is_high;
    return a.outer < b.outer;
  }
};

struct RequestLevel {
  Label operator()(const Request &r) const noexcept { return r.key().label(); }
};

using RequestPQ = LevelPQ<Request, RequestOrder, RequestLevel, Sweep::top_down>;
using RequestSorter = Sorter<Request, RequestOrder>;

/// Normalized child of an expansion: a terminal (t1 nil) or 1-2 targets.
struct Child {
  Uid t0;
  Uid t1 = Uid::nil();

  static Child terminal(bool v) { return {Uid::terminal(v)}; }
  bool is_terminal() const noexcept { return t0.is_terminal() && t1.is_nil(); }
};

/// Outcome of processing one (merged) request on its level.
struct Expansion {
  /// Emit a new node on this level with the two children; otherwise the
  /// parents are redirected to `low`.
  bool make_node = true;
  Child low;
  Child high;
};

/// What the sweep knows about the targets of a request on the current
/// level: children of a target on this level, or the target itself twice.
struct Contents {
  std::array<Uid, 2> low;
  std::array<Uid, 2> high;
};

struct Parent {
  Uid source;
  bool is_high;
  bool outer;
};

/// Output of a top-down sweep.
struct SweepOutput {
  ArcFile arcs;
  /// Arcs from outer parents to nodes of this sweep (sorted by target).
  std::vector<ArcRec> outer_internal;
  /// Terminal results for outer parents.
  std::vector<ArcRec> outer_terminal;
  std::uint64_t processed = 0;
  /// Requests created: queued, seeded, or resolved to a terminal on creation.
  std::uint64_t pushed = 0;
  std::uint64_t pushed_pairs = 0;
  /// The subset of `pushed` resolved to a terminal on creation.
  std::uint64_t terminal_results = 0;
};

/// Runs a top-down sweep over up to two uid-sorted node files.
///
/// Policy requirements:
///   Expansion expand(Label level, const Request &, const Contents &);
///   Uid resolve_terminal(const Request &);   // for all-terminal requests
///
/// Requests come from `pq` merged on the fly with `seed` (a finalized
/// sorter in the same order), which is how root requests of nested sweeps
/// enter without passing through the priority queue.
template <class Policy> class TopDownSweep {
public:
  /// `pq` replaces the sweep's own request queue when given; it must be
  /// reset and is left empty.
  TopDownSweep(Policy &policy, std::span<const NodeRec> file0, std::span<const NodeRec> file1,
               RequestPQ *pq = nullptr)
      : _policy(policy), _reader0(file0), _reader1(file1),
        _same_file(file0.data() == file1.data() && file0.size() == file1.size()),
        _pq(pq ? *pq : _own_pq) {}

  void push(const Request &r) {
    ++_out.pushed;
    if (r.arity() == 2)
      ++_out.pushed_pairs;
    _pq.push(r);
  }

  SweepOutput run(RequestSorter *seed = nullptr) {
    _seed = seed;
    if (_seed) {
      _seed->finalize();
      _out.pushed += _seed->size();
    }
    Sorter<ArcRec, BySource> terminal_arcs;
    _terminal_sorter = &terminal_arcs;

    while (true) {
      std::optional<Label> level;
      if (_pq.has_next_level())
        level = _pq.next_level();
      if (_seed && _seed->can_pull()) {
        Label l = RequestLevel{}(_seed->peek());
        level = level ? std::min(*level, l) : l;
      }
      if (!level)
        break;
      _pq.setup_next_level(*level);
      process_level(*level);
    }
    _out.arcs.terminal = terminal_arcs.drain();
    _terminal_sorter = nullptr;
    return std::move(_out);
  }

private:
  // A request whose second target sits later on the same level: the node
  // of the key target is carried along until the other one is read.
  struct Deferred {
    Request req;
    int known_pos;
    NodeRec known;
    std::vector<Parent> parents;
  };
  struct DeferredOrder {
    bool operator()(const Deferred &a, const Deferred &b) const noexcept {
      if (a.req.other() != b.req.other())
        return b.req.other() < a.req.other();
      return RequestOrder{}(b.req, a.req);
    }
  };

  bool seed_at(Label level) {
    return _seed && _seed->can_pull() && RequestLevel{}(_seed->peek()) == level;
  }

  // Pulls the smallest pending request of the level (from queue or seed).
  Request pull_next(Label level) {
    bool from_pq = _pq.can_pull();
    if (from_pq && seed_at(level))
      from_pq = !RequestOrder{}(_seed->peek(), _pq.peek());
    return from_pq ? _pq.pull() : _seed->pull();
  }

  bool has_more(Label level) { return _pq.can_pull() || seed_at(level); }

  const Request &peek_next(Label level) {
    if (_pq.can_pull() && seed_at(level))
      return RequestOrder{}(_seed->peek(), _pq.peek()) ? _seed->peek() : _pq.peek();
    return _pq.can_pull() ? _pq.peek() : _seed->peek();
  }

  void process_level(Label level) {
    std::uint64_t next_id = 0;
    std::priority_queue<Deferred, std::vector<Deferred>, DeferredOrder> deferred;

    auto finish = [&](const Request &targets, const Contents &c, std::vector<Parent> &parents) {
      ++_out.processed;
      Expansion e = _policy.expand(level, targets, c);
      if (!e.make_node) {
        for (const Parent &p : parents)
          forward(p, e.low);
        return;
      }
      Uid node = Uid::node(level, next_id++);
      for (const Parent &p : parents)
        emit(p, node);
      forward(Parent{node, false, false}, e.low);
      forward(Parent{node, true, false}, e.high);
    };

    while (has_more(level) || !deferred.empty()) {
      bool take_deferred = !deferred.empty();
      if (take_deferred && has_more(level))
        take_deferred = deferred.top().req.other() < peek_next(level).key();

      if (take_deferred) {
        Deferred d = deferred.top();
        deferred.pop();
        int other_pos = 1 - d.known_pos;
        const NodeRec &second = reader(other_pos).seek(d.req.other());
        Contents c;
        c.low[d.known_pos] = d.known.low;
        c.high[d.known_pos] = d.known.high;
        c.low[other_pos] = second.low;
        c.high[other_pos] = second.high;
        finish(d.req, c, d.parents);
        continue;
      }

      Request r = pull_next(level);
      std::vector<Parent> parents{{r.parent, r.is_high, r.outer}};
      while (has_more(level) && peek_next(level).same_targets(r)) {
        Request dup = pull_next(level);
        parents.push_back({dup.parent, dup.is_high, dup.outer});
      }

      if (level == Uid::kMaxLabel) {
        // Only unnormalized requests over terminals end up here.
        ++_out.processed;
        Child t{_policy.resolve_terminal(r)};
        for (const Parent &p : parents)
          forward(p, t);
        continue;
      }

      Contents c;
      std::optional<NodeRec> known;
      int known_pos = 0;
      bool defer = false;
      for (int pos = 0; pos < 2; ++pos) {
        Uid t = pos == 0 ? r.t0 : r.t1;
        if (t.is_node() && t.label() == level) {
          if (t == r.key()) {
            const NodeRec &n = reader(pos).seek(t);
            c.low[pos] = n.low;
            c.high[pos] = n.high;
            if (!known) {
              known = n;
              known_pos = pos;
            }
          } else {
            defer = true;
          }
        } else {
          c.low[pos] = t;
          c.high[pos] = t;
        }
      }
      if (defer) {
        assert(known);
        deferred.push(Deferred{r, known_pos, *known, std::move(parents)});
        continue;
      }
      finish(r, c, parents);
    }
    if (next_id > 0)
      _out.arcs.levels.push_back({level, next_id});
  }

  NodeReader &reader(int pos) { return (pos == 0 || _same_file) ? _reader0 : _reader1; }

  void emit(const Parent &p, Uid target) {
    if (p.source == Uid::no_parent()) {
      _out.arcs.root = target;
      return;
    }
    ArcRec arc{p.source, p.is_high, target};
    if (p.outer) {
      (target.is_terminal() ? _out.outer_terminal : _out.outer_internal).push_back(arc);
    } else if (target.is_terminal()) {
      _terminal_sorter->push(arc);
    } else {
      _out.arcs.internal.push_back(arc);
    }
  }

  void forward(const Parent &p, const Child &c) {
    if (c.is_terminal()) {
      ++_out.pushed;
      ++_out.terminal_results;
      emit(p, c.t0);
      return;
    }
    push(Request{c.t0, c.t1, p.source, p.is_high, p.outer});
  }

  Policy &_policy;
  NodeReader _reader0;
  NodeReader _reader1;
  bool _same_file;
  RequestPQ _own_pq;
  RequestPQ &_pq;
  RequestSorter *_seed = nullptr;
  Sorter<ArcRec, BySource> *_terminal_sorter = nullptr;
  SweepOutput _out;
};

} // namespace levelbdd::detail
