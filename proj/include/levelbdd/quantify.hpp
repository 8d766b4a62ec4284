/// @file  quantify.hpp
/// @brief Multi-variable quantification: a transposing top-down sweep
///        followed by a nested sweep, plus the one-variable-at-a-time
///        baseline.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "levelbdd/core.hpp"
#include "levelbdd/nested.hpp"
#include "levelbdd/storage.hpp"
#include "levelbdd/sweep.hpp"

namespace levelbdd {

/// How the input is turned into the arc file the nested sweep consumes.
enum class Transposition {
  plain,
  /// Collapse quantified nodes with a terminal child.
  prune_top,
  /// Resolve the deepest quantified level right away.
  deepest,
  /// Resolve all quantified levels where at most two subtrees meet.
  partial,
  /// Repeat `partial` while the result stays small.
  repeated_partial,
};

std::string_view to_string(Transposition t) noexcept;
std::optional<Transposition> parse_transposition(std::string_view s) noexcept;

struct QuantConfig {
  Transposition transposition = Transposition::plain;
  /// Growth threshold of repeated_partial.
  double epsilon = 0.5;
  /// Maximum number of passes of repeated_partial.
  unsigned delta = 2;
  /// Quantify one variable per sweep instead of nesting.
  bool one_by_one = false;
  bool terminal_arcs = true;
  bool bail_out = true;
  bool use_root_sorter = true;
};

Bdd exists(const Bdd &f, const std::set<Label> &vars, const QuantConfig &cfg = {},
           Stats *stats = nullptr);
Bdd forall(const Bdd &f, const std::set<Label> &vars, const QuantConfig &cfg = {},
           Stats *stats = nullptr);

/// Quantifies a single variable in one top-down sweep and a Reduce. `op` is
/// or for exists and and for forall.
Bdd quantify_single(const Bdd &f, Label i, const BinOp &op = ops::or_op, Stats *stats = nullptr);

/// Transposed file together with the quantified levels it still contains.
struct Transposed {
  ArcFile arcs;
  std::set<Label> remaining;
};

Transposed transpose_prune_top(const Bdd &f, const std::set<Label> &vars,
                               const BinOp &op = ops::or_op, Stats *stats = nullptr);
Transposed transpose_partial(const Bdd &f, const std::set<Label> &vars,
                             const BinOp &op = ops::or_op, Stats *stats = nullptr);
/// Requires at least one of `vars` in f.
Transposed transpose_deepest(const Bdd &f, const std::set<Label> &vars,
                             const BinOp &op = ops::or_op, Stats *stats = nullptr);
Transposed transpose_repeated_partial(const Bdd &f, const std::set<Label> &vars, double epsilon,
                                      unsigned delta, const BinOp &op = ops::or_op,
                                      Stats *stats = nullptr);

} // namespace levelbdd
