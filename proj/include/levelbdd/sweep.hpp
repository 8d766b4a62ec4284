/// @file  sweep.hpp
/// @brief Apply (top-down product) and Reduce (bottom-up canonicalization)

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "levelbdd/core.hpp"
#include "levelbdd/storage.hpp"

namespace levelbdd {

/// Binary Boolean operator given by its truth table.
class BinOp {
public:
  /// `table[2*a + b]` is the value of `a op b`.
  constexpr BinOp(std::array<bool, 4> table, const char *name) noexcept
      : _table(table), _name(name) {}

  constexpr bool operator()(bool a, bool b) const noexcept { return _table[2 * a + b]; }
  const char *name() const noexcept { return _name; }

  constexpr bool commutative() const noexcept { return _table[1] == _table[2]; }
  constexpr bool idempotent() const noexcept { return !_table[0] && _table[3]; }

  /// Value `a op x` when it does not depend on `x`.
  constexpr std::optional<bool> left_absorbing(bool a) const noexcept {
    if ((*this)(a, false) == (*this)(a, true))
      return (*this)(a, false);
    return std::nullopt;
  }
  constexpr std::optional<bool> right_absorbing(bool b) const noexcept {
    if ((*this)(false, b) == (*this)(true, b))
      return (*this)(false, b);
    return std::nullopt;
  }
  /// True when `v op x == x` for all x (and `x op v == x`).
  constexpr bool neutral(bool v) const noexcept {
    return (*this)(v, false) == false && (*this)(v, true) == true &&
           (*this)(false, v) == false && (*this)(true, v) == true;
  }

  /// Resolves a pair where at least one side is terminal, if possible.
  constexpr std::optional<Uid> shortcut(Uid a, Uid b) const noexcept {
    if (a.is_terminal() && b.is_terminal())
      return Uid::terminal((*this)(a.value(), b.value()));
    if (a.is_terminal())
      if (auto v = left_absorbing(a.value()))
        return Uid::terminal(*v);
    if (b.is_terminal())
      if (auto v = right_absorbing(b.value()))
        return Uid::terminal(*v);
    return std::nullopt;
  }

  friend constexpr bool operator==(const BinOp &x, const BinOp &y) noexcept {
    return x._table == y._table;
  }

private:
  std::array<bool, 4> _table;
  const char *_name;
};

namespace ops {
inline constexpr BinOp and_op{{false, false, false, true}, "and"};
inline constexpr BinOp or_op{{false, true, true, true}, "or"};
inline constexpr BinOp xor_op{{false, true, true, false}, "xor"};
inline constexpr BinOp xnor_op{{true, false, false, true}, "xnor"};
inline constexpr BinOp nand_op{{true, true, true, false}, "nand"};
inline constexpr BinOp nor_op{{true, false, false, false}, "nor"};
inline constexpr BinOp imp_op{{true, true, false, true}, "imp"};
inline constexpr BinOp diff_op{{false, false, true, false}, "diff"};
} // namespace ops

/// Top-down product construction. Returns the transposed, unreduced OBDD of
/// `op(f, g)`; constant results come back as an ArcFile with a terminal root.
ArcFile apply_unreduced(const Bdd &f, const Bdd &g, const BinOp &op, Stats *stats = nullptr);

/// Bottom-up reduction of a transposed OBDD into its canonical Bdd.
///
/// Within a level, surviving nodes receive ids in ascending order of their
/// (low, high) children, which makes equal functions bit-identical.
Bdd reduce(const ArcFile &a, Stats *stats = nullptr);

Bdd apply(const Bdd &f, const Bdd &g, const BinOp &op, Stats *stats = nullptr);
Bdd bdd_not(const Bdd &f);

/// if-then-else through two applies: (c ∧ t) ∨ (¬c ∧ e).
Bdd ite(const Bdd &c, const Bdd &t, const Bdd &e);

inline Bdd operator&(const Bdd &f, const Bdd &g) { return apply(f, g, ops::and_op); }
inline Bdd operator|(const Bdd &f, const Bdd &g) { return apply(f, g, ops::or_op); }
inline Bdd operator^(const Bdd &f, const Bdd &g) { return apply(f, g, ops::xor_op); }
inline Bdd operator~(const Bdd &f) { return bdd_not(f); }

} // namespace levelbdd
