/// @file  oracle.hpp
/// @brief Conventional depth-first BDD engine (unique table + memoization)
///        and truth-table brute force; ground truth for differential tests.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/sweep.hpp"

namespace levelbdd::oracle {

/// Hash-consed node store. Refs 0 and 1 are the false and true terminals.
///
/// Holds at most `node_cap` internal nodes; exceeding it throws EngineError.
class Manager {
public:
  using Ref = std::uint32_t;
  static constexpr Ref kFalseRef = 0;
  static constexpr Ref kTrueRef = 1;
  static constexpr std::size_t kDefaultCap = 1'000'000;

  explicit Manager(std::size_t node_cap = kDefaultCap);

  Ref terminal(bool v) const noexcept { return v ? kTrueRef : kFalseRef; }
  bool is_terminal(Ref r) const noexcept { return r < 2; }
  Ref var(Label i);
  Ref nvar(Label i);
  /// Unique-table lookup; applies the redundancy rule.
  Ref make(Label label, Ref low, Ref high);

  Label label(Ref r) const { return _nodes[r].label; }
  Ref low(Ref r) const { return _nodes[r].low; }
  Ref high(Ref r) const { return _nodes[r].high; }
  std::size_t size() const noexcept { return _nodes.size() - 2; }

  Ref df_apply(Ref f, Ref g, const BinOp &op);
  Ref df_not(Ref f);
  /// Multi-variable exists, line by line the textbook recursion.
  Ref df_exists(Ref f, const std::set<Label> &vars);
  Ref df_forall(Ref f, const std::set<Label> &vars);

  bool eval(Ref f, std::span<const bool> assignment) const;

  Bdd to_bdd(Ref f) const;
  Ref from_bdd(const Bdd &f);

private:
  struct Node {
    Label label;
    Ref low;
    Ref high;
  };
  struct Key {
    Label label;
    Ref low;
    Ref high;
    bool operator==(const Key &) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key &k) const noexcept {
      std::uint64_t h = k.label;
      h = h * 0x9e3779b97f4a7c15ull ^ k.low;
      h = h * 0x9e3779b97f4a7c15ull ^ k.high;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  Ref quantify(Ref f, const std::set<Label> &vars, const BinOp &op,
               std::unordered_map<Ref, Ref> &memo);

  std::size_t _cap;
  std::vector<Node> _nodes;
  std::unordered_map<Key, Ref, KeyHash> _unique;
};

/// Random function over labels [0, vars): literals combined pairwise at
/// random with and, or and xor until `leaves` literals form one tree.
Manager::Ref random_function(Manager &m, std::mt19937_64 &rng, Label vars, int leaves);

/// All 2^k values of `f` over `labels`; bit i of the index is labels[i].
/// Throws EngineError if `f` depends on a label outside `labels`.
std::vector<bool> truth_table(const Bdd &f, std::span<const Label> labels);

/// Existential (or universal) projection of a truth table over `labels`.
std::vector<bool> project(const std::vector<bool> &table, std::span<const Label> labels,
                          const std::set<Label> &vars, bool universal);

} // namespace levelbdd::oracle
