#include "levelbdd/core.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace levelbdd {

std::string to_string(Uid u) {
  if (u.is_terminal())
    return u.value() ? "T" : "F";
  if (u == Uid::nil())
    return "nil";
  if (u == Uid::no_parent())
    return "root";
  return "(" + std::to_string(u.label()) + "," + std::to_string(u.id()) + ")";
}

std::ostream &operator<<(std::ostream &os, Uid u) { return os << to_string(u); }

std::vector<LevelInfo> levels_of(std::span<const NodeRec> nodes) {
  std::vector<LevelInfo> out;
  for (const NodeRec &n : nodes) {
    if (out.empty() || out.back().label != n.uid.label())
      out.push_back({n.uid.label(), 0});
    ++out.back().count;
  }
  return out;
}

Bdd::Bdd(bool value)
    : _nodes(std::make_shared<const std::vector<NodeRec>>()),
      _levels(std::make_shared<const std::vector<LevelInfo>>()),
      _root(Uid::terminal(value)) {}

Bdd::Bdd(std::vector<NodeRec> nodes, Uid root) : _root(root) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeRec &n = nodes[i];
    if (!n.uid.is_node())
      throw EngineError("node file contains a non-internal uid");
    if (i > 0 && !(nodes[i - 1].uid < n.uid))
      throw EngineError("node file is not sorted by uid");
    for (Uid c : {n.low, n.high}) {
      if (!(c.is_terminal() || (c.is_node() && c.label() > n.uid.label())))
        throw EngineError("child " + to_string(c) + " of " + to_string(n.uid) +
                          " violates the level order");
    }
  }
  if (nodes.empty() && !root.is_terminal())
    throw EngineError("empty node file needs a terminal root");
  if (!nodes.empty() && root != nodes.front().uid)
    throw EngineError("root must be the first node of the file");
  auto levels = levels_of(nodes);
  _levels = std::make_shared<const std::vector<LevelInfo>>(std::move(levels));
  _nodes = std::make_shared<const std::vector<NodeRec>>(std::move(nodes));
}

void Stats::observe_size(std::uint64_t nodes, std::uint64_t w) noexcept {
  peak_nodes = std::max(peak_nodes, nodes);
  peak_width = std::max(peak_width, w);
}

void Stats::observe(const Bdd &f) noexcept { observe_size(node_count(f), width(f)); }

Stats &Stats::operator+=(const Stats &o) noexcept {
  requests_total += o.requests_total;
  requests_modifying += o.requests_modifying;
  requests_terminal += o.requests_terminal;
  inner_sweeps_invoked += o.inner_sweeps_invoked;
  inner_sweeps_skipped += o.inner_sweeps_skipped;
  gc_sweeps += o.gc_sweeps;
  arcs_pushed_outer += o.arcs_pushed_outer;
  arcs_pushed_inner += o.arcs_pushed_inner;
  or_requests_total += o.or_requests_total;
  transposed_arcs += o.transposed_arcs;
  transposed_nodes += o.transposed_nodes;
  peak_width = std::max(peak_width, o.peak_width);
  peak_nodes = std::max(peak_nodes, o.peak_nodes);
  return *this;
}

Bdd make_const(bool value) { return Bdd(value); }

static Bdd single_node(Label i, Uid low, Uid high) {
  if (i >= Uid::kMaxLabel)
    throw EngineError("label " + std::to_string(i) + " exceeds the maximum label");
  Uid root = Uid::node(i, 0);
  return Bdd({NodeRec{root, low, high}}, root);
}

Bdd make_var(Label i) { return single_node(i, kFalse, kTrue); }
Bdd make_nvar(Label i) { return single_node(i, kTrue, kFalse); }

namespace {

// Nodes are sorted by uid, so the position of (label, id) is the level's
// offset plus id.
class LevelIndex {
public:
  explicit LevelIndex(const Bdd &f) : _f(f) {
    std::uint64_t offset = 0;
    for (const LevelInfo &l : f.levels()) {
      _labels.push_back(l.label);
      _offsets.push_back(offset);
      offset += l.count;
    }
  }

  const NodeRec &at(Uid u) const {
    auto it = std::lower_bound(_labels.begin(), _labels.end(), u.label());
    if (it == _labels.end() || *it != u.label())
      throw EngineError("dangling uid " + to_string(u));
    std::uint64_t pos = _offsets[it - _labels.begin()] + u.id();
    const NodeRec &n = _f.nodes()[pos];
    if (n.uid != u)
      throw EngineError("dangling uid " + to_string(u));
    return n;
  }

private:
  const Bdd &_f;
  std::vector<Label> _labels;
  std::vector<std::uint64_t> _offsets;
};

} // namespace

bool eval(const Bdd &f, const std::function<bool(Label)> &assignment) {
  LevelIndex index(f);
  Uid cur = f.root();
  while (!cur.is_terminal()) {
    const NodeRec &n = index.at(cur);
    cur = assignment(cur.label()) ? n.high : n.low;
  }
  return cur.value();
}

bool eval(const Bdd &f, std::span<const bool> assignment) {
  return eval(f, [&](Label l) {
    if (l >= assignment.size())
      throw EngineError("no value assigned to x" + std::to_string(l));
    return assignment[l];
  });
}

std::uint64_t node_count(const Bdd &f) noexcept { return f.nodes().size(); }

std::uint64_t width(const Bdd &f) noexcept {
  std::uint64_t w = 0;
  for (const LevelInfo &l : f.levels())
    w = std::max(w, l.count);
  return w;
}

std::vector<Label> var_levels(const Bdd &f) {
  std::vector<Label> out;
  for (const LevelInfo &l : f.levels())
    out.push_back(l.label);
  return out;
}

std::string check_reduced(const Bdd &f) {
  auto nodes = f.nodes();
  std::unordered_set<Uid> referenced;
  for (const NodeRec &n : nodes) {
    referenced.insert(n.low);
    referenced.insert(n.high);
  }
  std::size_t i = 0;
  for (const LevelInfo &l : f.levels()) {
    for (std::uint64_t id = 0; id < l.count; ++id, ++i) {
      const NodeRec &n = nodes[i];
      if (n.uid.id() != id)
        return "ids on level " + std::to_string(l.label) + " are not dense";
      if (n.low == n.high)
        return "redundant node " + to_string(n.uid);
      if (id > 0 && nodes[i - 1].low == n.low && nodes[i - 1].high == n.high)
        return "duplicate node " + to_string(n.uid);
      if (n.uid != f.root() && !referenced.contains(n.uid))
        return "dead node " + to_string(n.uid);
    }
  }
  // Duplicates need not be adjacent in general; check per level.
  std::size_t begin = 0;
  for (const LevelInfo &l : f.levels()) {
    std::vector<std::pair<Uid, Uid>> kids;
    for (std::size_t k = begin; k < begin + l.count; ++k)
      kids.emplace_back(nodes[k].low, nodes[k].high);
    std::sort(kids.begin(), kids.end());
    if (std::adjacent_find(kids.begin(), kids.end()) != kids.end())
      return "duplicate node on level " + std::to_string(l.label);
    begin += l.count;
  }
  return {};
}

std::string to_dot(const Bdd &f) {
  std::ostringstream os;
  os << "digraph BDD {\n";
  auto name = [](Uid u) {
    if (u.is_terminal())
      return std::string(u.value() ? "T" : "F");
    return "n" + std::to_string(u.label()) + "_" + std::to_string(u.id());
  };
  bool need_false = f.root() == kFalse, need_true = f.root() == kTrue;
  for (const NodeRec &n : f.nodes()) {
    os << "  " << name(n.uid) << " [shape=circle, label=\"x" << n.uid.label()
       << "\"];\n";
    for (Uid c : {n.low, n.high}) {
      need_false |= c == kFalse;
      need_true |= c == kTrue;
    }
  }
  if (need_false)
    os << "  F [shape=box, label=\"0\"];\n";
  if (need_true)
    os << "  T [shape=box, label=\"1\"];\n";
  for (const NodeRec &n : f.nodes()) {
    os << "  " << name(n.uid) << " -> " << name(n.low) << " [style=dashed];\n";
    os << "  " << name(n.uid) << " -> " << name(n.high) << " [style=solid];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace levelbdd
