/// @file  storage.hpp
/// @brief Arc files, sequential readers, the external-capable sorter and the
///        conversions between node-based and arc-based representations.

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "levelbdd/core.hpp"

namespace levelbdd {

/// Engine-wide storage settings.
///
/// `memory_budget` is the number of bytes a single sorter may buffer before
/// it spills sorted runs to temporary files. Zero means unbounded (purely
/// in-memory). The temporary directory defaults to `$LEVELBDD_TMPDIR`, then
/// the system temporary directory.
struct StorageConfig {
  std::uint64_t memory_budget = 0;
  std::size_t block_size = 4096;
  std::filesystem::path temp_dir;
};

StorageConfig storage_config();
void set_storage_config(const StorageConfig &cfg);

/// Counts of sorter activity since process start, for tests and reports.
struct SorterCounters {
  std::uint64_t runs_spilled = 0;
  std::uint64_t bytes_spilled = 0;
};
SorterCounters sorter_counters();

namespace detail {
void note_spill(std::uint64_t bytes);
std::filesystem::path temp_dir();

/// A temporary file holding one sorted run, read back block by block.
class RunFile {
public:
  explicit RunFile(std::size_t block_size);
  ~RunFile();
  RunFile(const RunFile &) = delete;
  RunFile &operator=(const RunFile &) = delete;

  void write(const void *data, std::size_t bytes);
  void rewind();
  /// Reads up to `bytes`; returns the number read.
  std::size_t read(void *data, std::size_t bytes);

private:
  std::FILE *_file = nullptr;
  std::filesystem::path _path;
};
} // namespace detail

/// Stable sorter with an optional memory budget.
///
/// Items are buffered; once the buffer exceeds the configured budget it is
/// sorted and spilled as a run. `finalize` merges all runs (ties resolved by
/// run order, so the sort is stable). Items must be trivially copyable.
template <class T, class Compare = std::less<T>> class Sorter {
  static_assert(std::is_trivially_copyable_v<T>);

public:
  explicit Sorter(Compare cmp = Compare{}) : Sorter(cmp, storage_config()) {}
  Sorter(Compare cmp, const StorageConfig &cfg)
      : _cmp(std::move(cmp)), _block_size(std::max<std::size_t>(cfg.block_size, sizeof(T))) {
    if (cfg.memory_budget > 0) {
      _budget_items = std::max<std::uint64_t>(cfg.memory_budget / sizeof(T), _block_size / sizeof(T));
    }
  }

  Sorter(const Sorter &) = delete;
  Sorter &operator=(const Sorter &) = delete;

  void push(const T &item) {
    assert(!_finalized);
    _buffer.push_back(item);
    ++_size;
    if (_budget_items > 0 && _buffer.size() >= _budget_items)
      spill();
  }

  std::uint64_t size() const noexcept { return _size; }
  bool empty() const noexcept { return _size == _pulled; }

  void finalize() {
    assert(!_finalized);
    _finalized = true;
    std::stable_sort(_buffer.begin(), _buffer.end(), _cmp);
    if (_runs.empty())
      return;
    if (!_buffer.empty())
      spill_sorted();
    for (std::size_t r = 0; r < _runs.size(); ++r) {
      _runs[r]->rewind();
      _cursors.emplace_back();
      refill(r);
    }
    for (std::size_t r = 0; r < _runs.size(); ++r)
      if (has(r))
        _heap.push(r);
  }

  bool can_pull() const noexcept { return _pulled < _size; }

  const T &peek() {
    assert(_finalized && can_pull());
    if (_runs.empty())
      return _buffer[_pos];
    return current(_heap.top());
  }

  T pull() {
    assert(_finalized && can_pull());
    ++_pulled;
    if (_runs.empty())
      return _buffer[_pos++];
    std::size_t r = _heap.top();
    _heap.pop();
    T out = current(r);
    advance(r);
    if (has(r))
      _heap.push(r);
    return out;
  }

  /// Convenience: finalize and drain into a vector.
  std::vector<T> drain() {
    if (!_finalized)
      finalize();
    if (_runs.empty() && _pos == 0) {
      _pulled = _size;
      return std::move(_buffer);
    }
    std::vector<T> out;
    out.reserve(_size - _pulled);
    while (can_pull())
      out.push_back(pull());
    return out;
  }

  std::size_t runs() const noexcept { return _runs.size(); }

private:
  struct Cursor {
    std::vector<T> block;
    std::size_t pos = 0;
  };

  void spill() {
    std::stable_sort(_buffer.begin(), _buffer.end(), _cmp);
    spill_sorted();
  }
  void spill_sorted() {
    auto run = std::make_unique<detail::RunFile>(_block_size);
    run->write(_buffer.data(), _buffer.size() * sizeof(T));
    detail::note_spill(_buffer.size() * sizeof(T));
    _runs.push_back(std::move(run));
    _buffer.clear();
  }
  void refill(std::size_t r) {
    Cursor &c = _cursors[r];
    c.block.resize(std::max<std::size_t>(1, _block_size / sizeof(T)));
    std::size_t got = _runs[r]->read(c.block.data(), c.block.size() * sizeof(T));
    c.block.resize(got / sizeof(T));
    c.pos = 0;
  }
  bool has(std::size_t r) const { return _cursors[r].pos < _cursors[r].block.size(); }
  const T &current(std::size_t r) const { return _cursors[r].block[_cursors[r].pos]; }
  void advance(std::size_t r) {
    if (++_cursors[r].pos == _cursors[r].block.size())
      refill(r);
  }

  struct HeapCmp {
    const Sorter *self;
    bool operator()(std::size_t a, std::size_t b) const {
      const T &x = self->current(a);
      const T &y = self->current(b);
      if (self->_cmp(y, x))
        return true;
      if (self->_cmp(x, y))
        return false;
      return a > b;
    }
  };

  Compare _cmp;
  std::size_t _block_size;
  std::uint64_t _budget_items = 0;
  std::vector<T> _buffer;
  std::vector<std::unique_ptr<detail::RunFile>> _runs;
  std::vector<Cursor> _cursors;
  std::priority_queue<std::size_t, std::vector<std::size_t>, HeapCmp> _heap{HeapCmp{this}};
  std::uint64_t _size = 0;
  std::uint64_t _pulled = 0;
  std::size_t _pos = 0;
  bool _finalized = false;
};

/// Sorts a vector through a Sorter (spilling under the configured budget).
template <class T, class Compare> std::vector<T> sort_items(std::vector<T> items, Compare cmp) {
  Sorter<T, Compare> s(cmp);
  for (const T &x : items)
    s.push(x);
  items.clear();
  items.shrink_to_fit();
  return s.drain();
}

/// Order of internal arcs: by target, then source, then low before high.
struct ByTarget {
  bool operator()(const ArcRec &a, const ArcRec &b) const noexcept {
    if (a.target != b.target)
      return a.target < b.target;
    if (a.source != b.source)
      return a.source < b.source;
    return a.is_high < b.is_high;
  }
};

/// Order of terminal arcs (and of arcs in general when untransposing).
struct BySource {
  bool operator()(const ArcRec &a, const ArcRec &b) const noexcept {
    if (a.source != b.source)
      return a.source < b.source;
    return a.is_high < b.is_high;
  }
};

/// Transposed (arc-based) OBDD, possibly unreduced.
struct ArcFile {
  /// Arcs with an internal target, sorted ByTarget.
  std::vector<ArcRec> internal;
  /// Arcs with a terminal target, sorted BySource.
  std::vector<ArcRec> terminal;
  /// Per-level count of (unreduced) source nodes, ascending by label.
  std::vector<LevelInfo> levels;
  Uid root = kFalse;

  std::uint64_t node_count() const noexcept;
  std::uint64_t arc_count() const noexcept { return internal.size() + terminal.size(); }
  bool is_const() const noexcept { return root.is_terminal(); }

  friend bool operator==(const ArcFile &, const ArcFile &) = default;
};

/// Splits every node into its two arcs and sorts them by target.
/// Precondition: `f` is not constant.
ArcFile transpose(const Bdd &f);

/// Sorts all arcs by source and merges them back into nodes. The result is
/// a uid-sorted node file which need not be reduced.
std::vector<NodeRec> untranspose(const ArcFile &a);

/// Sequential forward reader over a uid-sorted node sequence. Seeks must be
/// monotone; a violation is a sweep bug and asserts.
class NodeReader {
public:
  explicit NodeReader(std::span<const NodeRec> nodes) : _nodes(nodes) {}

  /// Advances to the node with uid `u` and returns it.
  const NodeRec &seek(Uid u);
  bool has_next() const noexcept { return _pos < _nodes.size(); }
  const NodeRec &peek() const { return _nodes[_pos]; }
  const NodeRec &next() { return _nodes[_pos++]; }
  std::uint64_t reads() const noexcept { return _reads; }

private:
  std::span<const NodeRec> _nodes;
  std::size_t _pos = 0;
  std::uint64_t _reads = 0;
  Uid _last = Uid::node(0, 0);
  bool _started = false;
};

// Fixed-width little-endian file layouts.
void write_node_file(std::ostream &os, const Bdd &f);
Bdd read_node_file(std::istream &is);
void write_arc_file(std::ostream &os, const ArcFile &a);
ArcFile read_arc_file(std::istream &is);

} // namespace levelbdd
