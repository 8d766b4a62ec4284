/// @file  goe.hpp
/// @brief Game of Life transition relation in a row-major interleaved
///        variable order, and the Garden-of-Eden check built on it.

#pragma once

#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/quantify.hpp"

namespace levelbdd::goe {

/// Inner board size; the previous state has a one-cell border around it.
struct Grid {
  int rows = 0;
  int cols = 0;
};

/// Variable layout. Previous-state rows run from -1 to rows and columns from
/// -1 to cols. Each previous-state row gets its border cells first (left to
/// right), then, for every inner column, the previous-state cell immediately
/// followed by its next-state cell.
class GoeVarMap {
public:
  /// One next-state variable per inner cell.
  static GoeVarMap standard(Grid g);
  /// Inner rows r and rows-1-r share next-state variables.
  static GoeVarMap mirror_rows(Grid g);

  Grid grid() const noexcept { return _grid; }
  Label prev(int r, int c) const;
  Label next(int r, int c) const;
  /// All previous-state labels, ascending.
  std::vector<Label> prev_labels() const;
  /// Distinct next-state labels, ascending.
  std::vector<Label> next_labels() const;
  Label label_count() const noexcept { return _count; }

private:
  GoeVarMap(Grid g, bool mirror);

  Grid _grid;
  Label _count = 0;
  std::vector<Label> _prev;
  std::vector<Label> _next;
};

/// Conjunction over the inner cells of next <-> life(neighbourhood).
Bdd build_transition(Grid g, const GoeVarMap &vmap, Stats *stats = nullptr);

/// The relation with mirrored next-state rows.
inline Bdd build_transition_symmetric(Grid g, Stats *stats = nullptr) {
  return build_transition(g, GoeVarMap::mirror_rows(g), stats);
}

/// True iff some next-state board has no predecessor.
bool has_goe(Grid g, const QuantConfig &cfg = {}, Stats *stats = nullptr);

} // namespace levelbdd::goe
