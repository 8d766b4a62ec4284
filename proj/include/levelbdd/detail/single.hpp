/// @file  single.hpp
/// @brief Single-file product sweep with an idempotent, commutative operator:
///        the inner Apply of nested sweeping and the quantification
///        transpositions.

#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "levelbdd/detail/topdown.hpp"
#include "levelbdd/sweep.hpp"

namespace levelbdd::detail {

/// How levels in the quantified set are treated.
enum class QuantMode {
  /// Every quantified level is resolved; at most two survivors are allowed.
  resolve,
  /// Tuples of three or four survivors become a node on the level.
  partial,
};

/// Up to four targets combined with the operator, after normalization.
struct Tuple {
  std::array<Uid, 4> items{};
  unsigned size = 0;
  /// Resolved to a terminal.
  std::optional<Uid> terminal;

  Child child(unsigned from, unsigned to) const {
    if (to - from == 1)
      return Child{items[from]};
    return Child{items[from], items[from + 1]};
  }
};

/// Drops the neutral terminal, resolves the absorbing one, sorts and
/// removes duplicates. An empty tuple is the neutral value.
inline Tuple normalize(std::initializer_list<Uid> in, const BinOp &op) {
  Tuple t;
  for (Uid u : in) {
    if (u.is_nil())
      continue;
    if (u.is_terminal()) {
      if (op.neutral(u.value()))
        continue;
      t.terminal = u;
      return t;
    }
    t.items[t.size++] = u;
  }
  std::sort(t.items.begin(), t.items.begin() + t.size);
  t.size = static_cast<unsigned>(std::unique(t.items.begin(), t.items.begin() + t.size) -
                                 t.items.begin());
  if (t.size == 0)
    t.terminal = Uid::terminal(!op.neutral(false));
  return t;
}

inline Child to_child(const Tuple &t) {
  if (t.terminal)
    return Child{*t.terminal};
  return t.child(0, t.size);
}

/// Expansion rules of the single-file sweep.
///
/// Requests hold one target (a subtree to copy) or two sorted targets (to be
/// combined with `op`). On a level in `quantified` the children of every
/// target are combined instead of being kept. On a level in `prune`, a
/// copied node with a terminal child is collapsed.
class SingleFilePolicy {
public:
  SingleFilePolicy(const BinOp &op, std::set<Label> quantified = {},
                   QuantMode mode = QuantMode::resolve, std::set<Label> prune = {})
      : _op(op), _quantified(std::move(quantified)), _mode(mode), _prune(std::move(prune)) {
    if (!op.idempotent() || !op.commutative())
      throw EngineError(std::string("single-file sweep needs an idempotent operator, got ") +
                        op.name());
  }

  Expansion expand(Label level, const Request &r, const Contents &c) {
    if (_quantified.contains(level)) {
      Tuple t = normalize({c.low[0], c.high[0], c.low[1], c.high[1]}, _op);
      if (t.terminal || t.size <= 2)
        return {false, to_child(t), {}};
      if (_mode != QuantMode::partial)
        throw EngineError("request combines more than two targets");
      _created.insert(level);
      return {true, t.child(0, 2), t.child(2, t.size)};
    }
    if (r.arity() == 1 && _prune.contains(level)) {
      Uid lo = c.low[0], hi = c.high[0];
      for (auto [a, b] : {std::pair{lo, hi}, std::pair{hi, lo}}) {
        if (!a.is_terminal())
          continue;
        if (_op.neutral(a.value()))
          return {false, Child{b}, {}};
        return {false, Child{a}, {}};
      }
    }
    return {true, to_child(normalize({c.low[0], c.low[1]}, _op)),
            to_child(normalize({c.high[0], c.high[1]}, _op))};
  }

  Uid resolve_terminal(const Request &r) const {
    if (r.arity() == 1)
      return r.t0;
    return *_op.shortcut(r.t0, r.t1);
  }

  /// Quantified levels on which the sweep created nodes.
  const std::set<Label> &created() const noexcept { return _created; }

private:
  BinOp _op;
  std::set<Label> _quantified;
  QuantMode _mode;
  std::set<Label> _prune;
  std::set<Label> _created;
};

} // namespace levelbdd::detail
