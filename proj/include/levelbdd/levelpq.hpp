/// @file  levelpq.hpp
/// @brief Levelized (monotone) priority queues used by every sweep

#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/storage.hpp"

namespace levelbdd {

/// Order in which a sweep visits levels.
enum class Sweep { top_down, bottom_up };

namespace detail {
template <Sweep D> struct LevelOrder {
  bool operator()(Label a, Label b) const noexcept {
    if constexpr (D == Sweep::top_down)
      return a < b;
    else
      return a > b;
  }
};
} // namespace detail

/// Levelized priority queue: one bucket per future level, each bucket a
/// Sorter that is sorted once when its level starts.
///
/// `LevelOf` maps an element to the level it is processed on; `Compare`
/// orders elements within a level. Pushing to the current level or one
/// already passed is a sweep bug and asserts.
template <class E, class Compare, class LevelOf, Sweep D> class LevelPQ {
public:
  explicit LevelPQ(Compare cmp = Compare{}, LevelOf level_of = LevelOf{})
      : _cmp(cmp), _level_of(level_of) {}

  void push(const E &e) {
    Label l = _level_of(e);
    assert(!_current || detail::LevelOrder<D>{}(*_current, l));
    auto it = _buckets.find(l);
    if (it == _buckets.end())
      it = _buckets.emplace(l, std::make_unique<Sorter<E, Compare>>(_cmp)).first;
    it->second->push(e);
    ++_size;
  }

  bool has_next_level() const noexcept { return !_buckets.empty(); }
  Label next_level() const { return _buckets.begin()->first; }

  /// Advances to the next nonempty level, or to `stop` if that comes first.
  /// Returns false when there is no level left to advance to.
  bool setup_next_level(std::optional<Label> stop = std::nullopt) {
    assert(empty_level());
    _active.reset();
    if (_buckets.empty()) {
      if (stop) {
        _current = *stop;
        return true;
      }
      return false;
    }
    Label l = _buckets.begin()->first;
    if (stop && detail::LevelOrder<D>{}(*stop, l)) {
      _current = *stop;
      return true;
    }
    _current = l;
    _active = std::move(_buckets.begin()->second);
    _buckets.erase(_buckets.begin());
    _active->finalize();
    return true;
  }

  std::optional<Label> current_level() const noexcept { return _current; }
  bool empty_level() const noexcept { return !_active || !_active->can_pull(); }
  bool can_pull() const noexcept { return !empty_level(); }
  const E &peek() { return _active->peek(); }
  E pull() {
    --_size;
    return _active->pull();
  }

  std::uint64_t size() const noexcept { return _size; }
  bool empty() const noexcept { return _size == 0; }

  /// Forgets the current level; only valid when the queue is empty. Lets a
  /// drained queue be reused by a later sweep starting above it again.
  void reset() {
    assert(empty());
    _active.reset();
    _current.reset();
  }

private:
  Compare _cmp;
  LevelOf _level_of;
  std::map<Label, std::unique_ptr<Sorter<E, Compare>>, detail::LevelOrder<D>> _buckets;
  std::unique_ptr<Sorter<E, Compare>> _active;
  std::optional<Label> _current;
  std::uint64_t _size = 0;
};

/// Heap-backed queue with the LevelPQ interface, kept for differential
/// testing of the bucketed implementation.
template <class E, class Compare, class LevelOf, Sweep D> class HeapLevelPQ {
public:
  explicit HeapLevelPQ(Compare cmp = Compare{}, LevelOf level_of = LevelOf{})
      : _heap(HeapCmp{cmp, level_of}), _level_of(level_of) {}

  void push(const E &e) {
    assert(!_current || detail::LevelOrder<D>{}(*_current, _level_of(e)));
    _heap.push(e);
  }
  bool has_next_level() const noexcept { return !_heap.empty() && !can_pull(); }
  Label next_level() const { return _level_of(_heap.top()); }

  bool setup_next_level(std::optional<Label> stop = std::nullopt) {
    assert(empty_level());
    if (_heap.empty()) {
      if (stop) {
        _current = *stop;
        return true;
      }
      return false;
    }
    Label l = _level_of(_heap.top());
    _current = (stop && detail::LevelOrder<D>{}(*stop, l)) ? *stop : l;
    return true;
  }
  std::optional<Label> current_level() const noexcept { return _current; }
  bool empty_level() const noexcept {
    return !_current || _heap.empty() || _level_of(_heap.top()) != *_current;
  }
  bool can_pull() const noexcept { return !empty_level(); }
  const E &peek() const { return _heap.top(); }
  E pull() {
    E e = _heap.top();
    _heap.pop();
    return e;
  }
  std::uint64_t size() const noexcept { return _heap.size(); }
  bool empty() const noexcept { return _heap.empty(); }
  void reset() {
    assert(empty());
    _current.reset();
  }

private:
  struct HeapCmp {
    Compare cmp;
    LevelOf level_of;
    // std::priority_queue is a max-heap: "less" means lower priority.
    bool operator()(const E &a, const E &b) const {
      Label la = level_of(a), lb = level_of(b);
      if (la != lb)
        return detail::LevelOrder<D>{}(lb, la);
      return cmp(b, a);
    }
  };
  std::priority_queue<E, std::vector<E>, HeapCmp> _heap;
  LevelOf _level_of;
  std::optional<Label> _current;
};

} // namespace levelbdd
