/// @file  nested.hpp
/// @brief Nested sweeping: an outer Reduce that, at designated levels, hands
///        batches of requests to inner Apply/Reduce sweeps over the part of
///        the result built so far, and splices their output back in.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/storage.hpp"
#include "levelbdd/sweep.hpp"

namespace levelbdd {

struct NestingPolicy {
  /// Levels whose nodes are replaced by op(low, high). Need not be sorted.
  std::vector<Label> nesting_levels;
  /// Idempotent and commutative: or for exists, and for forall.
  BinOp op = ops::or_op;
  /// Terminal results bypass the inner sweeps.
  bool terminal_arcs = true;
  /// Skip inner sweeps that would only copy subtrees.
  bool bail_out = true;
  /// Collect root requests in a sorted list instead of the request queue.
  bool use_root_sorter = true;
};

/// Reduces `a` while resolving every node on a nesting level. Nesting levels
/// absent from `a` are ignored; with none left this is a plain Reduce.
///
/// Throws EngineError on malformed input or a non-idempotent operator.
Bdd nested_sweep(const ArcFile &a, const NestingPolicy &policy, Stats &stats);

/// The request an arc into a node (low, high) on a nesting level turns into.
struct NestedTargets {
  Uid t0;
  Uid t1 = Uid::nil();
  /// A terminal absorbed an internal sibling, which may now be dead.
  bool killed_sibling = false;

  bool is_terminal() const noexcept { return t0.is_terminal() && t1.is_nil(); }
  bool preserving() const noexcept { return t1.is_nil(); }
};

NestedTargets nested_targets(Uid low, Uid high, const BinOp &op);

enum class Route { outer_up, root_requests };

/// Where a resolved arc s -> target goes when `boundary` is the next
/// nesting level whose inner sweep has not run yet.
Route route_arc(Label source, Uid target, std::optional<Label> boundary, bool terminal_arcs);

/// Terminal results are forwarded directly when the optimisation is on.
inline Route route_terminal(Label source, std::optional<Label> boundary, bool terminal_arcs) {
  return route_arc(source, kTrue, boundary, terminal_arcs);
}

enum class BailOut { skipped, must_run_op, must_run_gc };

/// Decides whether the inner sweep of a nesting level can be skipped.
/// `dirty` records an absorbed internal sibling since the last inner sweep.
BailOut try_bail_out(bool enabled, bool all_preserving, bool dirty, bool shallowest);

/// Copies the part of the uid-sorted `deep` file reachable from `roots` as a
/// transposed file. The root field is set when there is exactly one root.
ArcFile gc_sweep(std::span<const Uid> roots, std::span<const NodeRec> deep);

} // namespace levelbdd
