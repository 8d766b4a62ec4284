#include "levelbdd/goe.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "levelbdd/sweep.hpp"

namespace levelbdd::goe {

namespace {
constexpr Label kUnset = Uid::kMaxLabel;
}

GoeVarMap::GoeVarMap(Grid g, bool mirror) : _grid(g) {
  if (g.rows < 1 || g.cols < 1)
    throw EngineError("grid must be at least 1x1");
  if (static_cast<std::uint64_t>(g.rows + 2) * static_cast<std::uint64_t>(g.cols + 2) * 2 >=
      Uid::kMaxLabel)
    throw EngineError("grid too large for the label space");
  const int w = g.cols + 2;
  _prev.assign(static_cast<std::size_t>((g.rows + 2) * w), kUnset);
  _next.assign(static_cast<std::size_t>(g.rows * g.cols), kUnset);
  for (int r = -1; r <= g.rows; ++r) {
    const bool inner_row = r >= 0 && r < g.rows;
    for (int c = -1; c <= g.cols; ++c)
      if (!inner_row || c < 0 || c >= g.cols)
        _prev[static_cast<std::size_t>((r + 1) * w + c + 1)] = _count++;
    if (!inner_row)
      continue;
    for (int c = 0; c < g.cols; ++c) {
      _prev[static_cast<std::size_t>((r + 1) * w + c + 1)] = _count++;
      int twin = g.rows - 1 - r;
      if (mirror && twin < r)
        _next[static_cast<std::size_t>(r * g.cols + c)] = next(twin, c);
      else
        _next[static_cast<std::size_t>(r * g.cols + c)] = _count++;
    }
  }
}

GoeVarMap GoeVarMap::standard(Grid g) { return GoeVarMap(g, false); }
GoeVarMap GoeVarMap::mirror_rows(Grid g) { return GoeVarMap(g, true); }

Label GoeVarMap::prev(int r, int c) const {
  if (r < -1 || r > _grid.rows || c < -1 || c > _grid.cols)
    throw EngineError("prev cell out of range");
  return _prev[static_cast<std::size_t>((r + 1) * (_grid.cols + 2) + c + 1)];
}

Label GoeVarMap::next(int r, int c) const {
  if (r < 0 || r >= _grid.rows || c < 0 || c >= _grid.cols)
    throw EngineError("next cell out of range");
  return _next[static_cast<std::size_t>(r * _grid.cols + c)];
}

std::vector<Label> GoeVarMap::prev_labels() const {
  std::vector<Label> out = _prev;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Label> GoeVarMap::next_labels() const {
  std::set<Label> s(_next.begin(), _next.end());
  return {s.begin(), s.end()};
}

namespace {

// next <-> (exactly three live neighbours, or alive with exactly two).
Bdd cell_constraint(const GoeVarMap &vmap, int r, int c, Stats *stats) {
  std::vector<Label> neighbours;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if (dr != 0 || dc != 0)
        neighbours.push_back(vmap.prev(r + dr, c + dc));
  std::sort(neighbours.begin(), neighbours.end());

  // count[k]: exactly k live neighbours so far; count[4]: four or more.
  std::array<Bdd, 5> count{make_const(true), make_const(false), make_const(false),
                           make_const(false), make_const(false)};
  for (Label l : neighbours) {
    Bdd v = make_var(l);
    std::array<Bdd, 5> nc;
    nc[0] = apply(count[0], bdd_not(v), ops::and_op, stats);
    for (int k = 1; k <= 3; ++k)
      nc[k] = ite(v, count[k - 1], count[k]);
    nc[4] = apply(count[4], apply(count[3], v, ops::and_op, stats), ops::or_op, stats);
    count = nc;
  }
  Bdd alive = apply(count[3],
                    apply(make_var(vmap.prev(r, c)), count[2], ops::and_op, stats), ops::or_op,
                    stats);
  return apply(make_var(vmap.next(r, c)), alive, ops::xnor_op, stats);
}

} // namespace

Bdd build_transition(Grid g, const GoeVarMap &vmap, Stats *stats) {
  if (vmap.grid().rows != g.rows || vmap.grid().cols != g.cols)
    throw EngineError("variable map does not match the grid");
  Bdd rel = make_const(true);
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c)
      rel = apply(rel, cell_constraint(vmap, r, c, stats), ops::and_op, stats);
  return rel;
}

bool has_goe(Grid g, const QuantConfig &cfg, Stats *stats) {
  GoeVarMap vmap = GoeVarMap::standard(g);
  Bdd rel = build_transition(g, vmap, stats);
  std::vector<Label> prev = vmap.prev_labels();
  Bdd image = exists(rel, std::set<Label>(prev.begin(), prev.end()), cfg, stats);
  return !(image.is_const() && image.value());
}

} // namespace levelbdd::goe
