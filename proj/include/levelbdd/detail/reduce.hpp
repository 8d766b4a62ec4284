/// @file  reduce.hpp
/// @brief Per-level building blocks of the bottom-up Reduce sweep

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/levelpq.hpp"
#include "levelbdd/storage.hpp"

namespace levelbdd::detail {

/// A reduced uid travelling up to an unreduced parent.
struct Forward {
  Uid source;
  bool is_high;
  Uid target;
};

struct ForwardOrder {
  bool operator()(const Forward &a, const Forward &b) const noexcept {
    if (a.source != b.source)
      return a.source < b.source;
    return a.is_high < b.is_high;
  }
};

struct ForwardLevel {
  Label operator()(const Forward &f) const noexcept { return f.source.label(); }
};

using ForwardPQ = LevelPQ<Forward, ForwardOrder, ForwardLevel, Sweep::bottom_up>;

/// Result of reducing one level.
struct ReducedLevel {
  Label label = 0;
  /// Indexed by unreduced id: the reduced node, or the uid a redundant node
  /// was replaced by.
  std::vector<Uid> result;
  /// Surviving nodes with dense ids, ascending by (low, high).
  std::vector<NodeRec> nodes;
  /// Children of each unreduced node after resolution (by unreduced id).
  std::vector<Uid> low;
  std::vector<Uid> high;
};

/// Gathers the children of every node on `level` (from the level's terminal
/// arcs and the forwarded results waiting in `pq`, which must already be
/// set up on this level) and applies both reduction rules.
ReducedLevel reduce_level(Label level, std::uint64_t count, std::span<const ArcRec> terminal_arcs,
                          ForwardPQ &pq);

/// Walks an arc file level by level from the deepest level upwards,
/// handing out the terminal arcs sourced on a level and the internal arcs
/// targeting it.
class LevelArcCursor {
public:
  LevelArcCursor(std::span<const ArcRec> internal, std::span<const ArcRec> terminal)
      : _internal(internal), _terminal(terminal), _int_end(internal.size()),
        _term_end(terminal.size()) {}

  std::span<const ArcRec> terminal_from(Label level);
  std::span<const ArcRec> internal_into(Label level);

private:
  std::span<const ArcRec> _internal;
  std::span<const ArcRec> _terminal;
  std::size_t _int_end;
  std::size_t _term_end;
};

} // namespace levelbdd::detail
