/// @file  core.hpp
/// @brief Node identifiers, on-stream records and the immutable Bdd handle

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace levelbdd {

/// Level index under the identity variable order.
using Label = std::uint32_t;

/// Raised on malformed input to an engine operation (not on internal bugs,
/// which are assertions).
class EngineError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured size limit was exceeded; the computation is not wrong, it
/// did not finish.
class ResourceLimit : public EngineError {
public:
  using EngineError::EngineError;
};

/// Unique identifier of a node or terminal.
///
/// Packed into one 64-bit word: bit 63 is reserved for the on-disk arc flag,
/// bits 62..39 hold the label and bits 38..0 the within-level id. The label
/// value `kMaxLabel` is reserved for terminals and sentinels, which makes
/// every internal uid compare less than every terminal and lets all streams
/// share one integer comparison.
class Uid {
public:
  static constexpr unsigned kIdBits = 39;
  static constexpr unsigned kLabelBits = 24;
  static constexpr std::uint64_t kMaxId = (std::uint64_t{1} << kIdBits) - 1;
  static constexpr Label kMaxLabel = (Label{1} << kLabelBits) - 1;
  static constexpr std::uint64_t kWordMask = (std::uint64_t{1} << 63) - 1;

  constexpr Uid() noexcept = default;

  static constexpr Uid node(Label label, std::uint64_t id) noexcept {
    return Uid((std::uint64_t{label} << kIdBits) | id);
  }
  static constexpr Uid terminal(bool value) noexcept {
    return Uid((std::uint64_t{kMaxLabel} << kIdBits) | (value ? 1u : 0u));
  }
  /// Placeholder for an absent second target of a request. Sorts after
  /// both terminals.
  static constexpr Uid nil() noexcept {
    return Uid((std::uint64_t{kMaxLabel} << kIdBits) | kMaxId);
  }
  /// Parent of a root request: the result becomes the root of the output.
  static constexpr Uid no_parent() noexcept {
    return Uid((std::uint64_t{kMaxLabel} << kIdBits) | (kMaxId - 1));
  }
  static constexpr Uid from_raw(std::uint64_t word) noexcept {
    return Uid(word & kWordMask);
  }

  constexpr std::uint64_t raw() const noexcept { return _word; }
  constexpr Label label() const noexcept {
    return static_cast<Label>(_word >> kIdBits);
  }
  constexpr std::uint64_t id() const noexcept { return _word & kMaxId; }

  constexpr bool is_node() const noexcept { return label() < kMaxLabel; }
  constexpr bool is_terminal() const noexcept {
    return label() == kMaxLabel && id() < 2;
  }
  constexpr bool is_nil() const noexcept { return *this == nil(); }
  /// Terminal value; only meaningful when `is_terminal()`.
  constexpr bool value() const noexcept { return id() == 1; }

  constexpr auto operator<=>(const Uid &) const noexcept = default;

private:
  constexpr explicit Uid(std::uint64_t w) noexcept : _word(w) {}
  std::uint64_t _word = (std::uint64_t{kMaxLabel} << kIdBits) | kMaxId;
};

inline constexpr Uid kFalse = Uid::terminal(false);
inline constexpr Uid kTrue = Uid::terminal(true);

/// Total order on uids: internal before terminal, (label, id)
/// lexicographically, false before true.
constexpr std::strong_ordering cmp_uid(Uid a, Uid b) noexcept { return a <=> b; }

std::string to_string(Uid u);
std::ostream &operator<<(std::ostream &os, Uid u);

/// A node on a node stream.
struct NodeRec {
  Uid uid;
  Uid low;
  Uid high;

  friend constexpr bool operator==(const NodeRec &, const NodeRec &) = default;
};

/// A directed edge on an arc stream.
struct ArcRec {
  Uid source;
  bool is_high = false;
  Uid target;

  friend constexpr bool operator==(const ArcRec &, const ArcRec &) = default;
};

struct LevelInfo {
  Label label = 0;
  std::uint64_t count = 0;

  friend constexpr bool operator==(const LevelInfo &, const LevelInfo &) = default;
};

/// Recomputes per-level metadata of a uid-sorted node sequence.
std::vector<LevelInfo> levels_of(std::span<const NodeRec> nodes);

/// Immutable levelized node file.
///
/// Nodes are sorted ascending by uid. A constant function has no nodes and a
/// terminal root. Copies share storage.
class Bdd {
public:
  Bdd() : Bdd(false) {}
  explicit Bdd(bool value);
  /// Takes ownership of a uid-sorted node sequence. Checks ordering, child
  /// labels and level metadata; does not check reducedness.
  Bdd(std::vector<NodeRec> nodes, Uid root);

  bool is_const() const noexcept { return _root.is_terminal(); }
  /// Value of a constant Bdd.
  bool value() const noexcept { return _root.value(); }
  Uid root() const noexcept { return _root; }
  std::span<const NodeRec> nodes() const noexcept { return *_nodes; }
  const std::vector<LevelInfo> &levels() const noexcept { return *_levels; }

  friend bool operator==(const Bdd &a, const Bdd &b) {
    return a._root == b._root && *a._nodes == *b._nodes;
  }

private:
  std::shared_ptr<const std::vector<NodeRec>> _nodes;
  std::shared_ptr<const std::vector<LevelInfo>> _levels;
  Uid _root;
};

/// Monotone counters shared by the sweeps of one computation.
struct Stats {
  /// Requests created by sweeps, including those resolved to a terminal at
  /// once. requests_modifying and requests_terminal are subsets.
  std::uint64_t requests_total = 0;
  /// Requests with two targets.
  std::uint64_t requests_modifying = 0;
  std::uint64_t requests_terminal = 0;
  std::uint64_t inner_sweeps_invoked = 0;
  std::uint64_t inner_sweeps_skipped = 0;
  std::uint64_t gc_sweeps = 0;
  std::uint64_t arcs_pushed_outer = 0;
  std::uint64_t arcs_pushed_inner = 0;
  std::uint64_t or_requests_total = 0;
  std::uint64_t transposed_arcs = 0;
  std::uint64_t transposed_nodes = 0;
  std::uint64_t peak_width = 0;
  std::uint64_t peak_nodes = 0;

  void observe(const Bdd &f) noexcept;
  void observe_size(std::uint64_t nodes, std::uint64_t width) noexcept;
  Stats &operator+=(const Stats &o) noexcept;
};

Bdd make_const(bool value);
Bdd make_var(Label i);
Bdd make_nvar(Label i);

/// Evaluates `f` under an assignment indexed by label. Throws EngineError if
/// a visited label is out of range of `assignment`.
bool eval(const Bdd &f, std::span<const bool> assignment);
bool eval(const Bdd &f, const std::function<bool(Label)> &assignment);

std::uint64_t node_count(const Bdd &f) noexcept;
std::uint64_t width(const Bdd &f) noexcept;
std::vector<Label> var_levels(const Bdd &f);

/// Checks the reduced-file invariants (dense ids, no duplicate or redundant
/// node, every non-root node referenced). Returns an empty string when they
/// hold, otherwise a description of the first violation.
std::string check_reduced(const Bdd &f);

/// Graphviz rendering: circles labeled x<label>, terminal boxes, dashed low
/// and solid high edges.
std::string to_dot(const Bdd &f);

} // namespace levelbdd

template <> struct std::hash<levelbdd::Uid> {
  std::size_t operator()(levelbdd::Uid u) const noexcept {
    return std::hash<std::uint64_t>{}(u.raw());
  }
};
