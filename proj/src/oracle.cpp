#include "levelbdd/oracle.hpp"

#include <algorithm>
#include <tuple>

namespace levelbdd::oracle {

Manager::Manager(std::size_t node_cap) : _cap(node_cap) {
  _nodes.push_back({Uid::kMaxLabel, kFalseRef, kFalseRef});
  _nodes.push_back({Uid::kMaxLabel, kTrueRef, kTrueRef});
}

Manager::Ref Manager::var(Label i) { return make(i, kFalseRef, kTrueRef); }
Manager::Ref Manager::nvar(Label i) { return make(i, kTrueRef, kFalseRef); }

Manager::Ref Manager::make(Label label, Ref low, Ref high) {
  if (low == high)
    return low;
  Key k{label, low, high};
  if (auto it = _unique.find(k); it != _unique.end())
    return it->second;
  if (size() >= _cap)
    throw ResourceLimit("oracle node cap exceeded");
  Ref r = static_cast<Ref>(_nodes.size());
  _nodes.push_back({label, low, high});
  _unique.emplace(k, r);
  return r;
}

Manager::Ref Manager::df_apply(Ref f, Ref g, const BinOp &op) {
  std::map<std::pair<Ref, Ref>, Ref> memo;
  auto rec = [&](auto &&self, Ref a, Ref b) -> Ref {
    if (is_terminal(a) && is_terminal(b))
      return terminal(op(a == kTrueRef, b == kTrueRef));
    if (is_terminal(a))
      if (auto v = op.left_absorbing(a == kTrueRef))
        return terminal(*v);
    if (is_terminal(b))
      if (auto v = op.right_absorbing(b == kTrueRef))
        return terminal(*v);
    if (auto it = memo.find({a, b}); it != memo.end())
      return it->second;
    Label la = is_terminal(a) ? Uid::kMaxLabel : label(a);
    Label lb = is_terminal(b) ? Uid::kMaxLabel : label(b);
    Label top = std::min(la, lb);
    Ref a0 = la == top ? low(a) : a, a1 = la == top ? high(a) : a;
    Ref b0 = lb == top ? low(b) : b, b1 = lb == top ? high(b) : b;
    Ref lo = self(self, a0, b0);
    Ref hi = self(self, a1, b1);
    Ref r = make(top, lo, hi);
    memo.emplace(std::make_pair(a, b), r);
    return r;
  };
  return rec(rec, f, g);
}

Manager::Ref Manager::df_not(Ref f) { return df_apply(f, kTrueRef, ops::xor_op); }

Manager::Ref Manager::quantify(Ref v, const std::set<Label> &vars, const BinOp &op,
                               std::unordered_map<Ref, Ref> &memo) {
  if (v == kFalseRef || v == kTrueRef)
    return v;
  if (auto it = memo.find(v); it != memo.end())
    return it->second;
  Ref exi0 = quantify(low(v), vars, op, memo);
  Ref exi1 = quantify(high(v), vars, op, memo);
  Ref r;
  if (!vars.contains(label(v)))
    r = make(label(v), exi0, exi1);
  else
    r = df_apply(exi0, exi1, op);
  memo.emplace(v, r);
  return r;
}

Manager::Ref Manager::df_exists(Ref f, const std::set<Label> &vars) {
  std::unordered_map<Ref, Ref> memo;
  return quantify(f, vars, ops::or_op, memo);
}

Manager::Ref Manager::df_forall(Ref f, const std::set<Label> &vars) {
  std::unordered_map<Ref, Ref> memo;
  return quantify(f, vars, ops::and_op, memo);
}

bool Manager::eval(Ref f, std::span<const bool> assignment) const {
  while (!is_terminal(f))
    f = assignment[label(f)] ? high(f) : low(f);
  return f == kTrueRef;
}

Bdd Manager::to_bdd(Ref f) const {
  if (is_terminal(f))
    return Bdd(f == kTrueRef);
  // Collect reachable nodes per level.
  std::map<Label, std::vector<Ref>> by_level;
  std::vector<Ref> stack{f};
  std::unordered_map<Ref, Uid> uid_of;
  uid_of[kFalseRef] = kFalse;
  uid_of[kTrueRef] = kTrue;
  std::unordered_map<Ref, bool> seen;
  while (!stack.empty()) {
    Ref r = stack.back();
    stack.pop_back();
    if (is_terminal(r) || seen[r])
      continue;
    seen[r] = true;
    by_level[label(r)].push_back(r);
    stack.push_back(low(r));
    stack.push_back(high(r));
  }
  // Deepest level first so children already carry their final uid; ids go
  // by ascending (low, high).
  std::vector<std::vector<NodeRec>> levels;
  for (auto it = by_level.rbegin(); it != by_level.rend(); ++it) {
    std::vector<std::tuple<Uid, Uid, Ref>> rows;
    for (Ref r : it->second)
      rows.emplace_back(uid_of.at(low(r)), uid_of.at(high(r)), r);
    std::sort(rows.begin(), rows.end());
    std::vector<NodeRec> level;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto [lo, hi, r] = rows[i];
      Uid u = Uid::node(it->first, i);
      uid_of[r] = u;
      level.push_back({u, lo, hi});
    }
    levels.push_back(std::move(level));
  }
  std::vector<NodeRec> nodes;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    nodes.insert(nodes.end(), it->begin(), it->end());
  return Bdd(std::move(nodes), uid_of.at(f));
}

Manager::Ref Manager::from_bdd(const Bdd &f) {
  if (f.is_const())
    return terminal(f.value());
  std::unordered_map<Uid, Ref> ref_of{{kFalse, kFalseRef}, {kTrue, kTrueRef}};
  auto nodes = f.nodes();
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
    ref_of[it->uid] = make(it->uid.label(), ref_of.at(it->low), ref_of.at(it->high));
  return ref_of.at(f.root());
}

Manager::Ref random_function(Manager &m, std::mt19937_64 &rng, Label vars, int leaves) {
  std::uniform_int_distribution<Label> pick(0, vars - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Manager::Ref> pool;
  for (int i = 0; i < std::max(leaves, 1); ++i)
    pool.push_back(coin(rng) ? m.var(pick(rng)) : m.nvar(pick(rng)));
  const BinOp table[] = {ops::and_op, ops::or_op, ops::xor_op, ops::and_op, ops::or_op};
  std::uniform_int_distribution<int> pick_op(0, 4);
  while (pool.size() > 1) {
    std::uniform_int_distribution<std::size_t> at(0, pool.size() - 1);
    std::size_t i = at(rng);
    Manager::Ref a = pool[i];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    std::uniform_int_distribution<std::size_t> at2(0, pool.size() - 1);
    std::size_t j = at2(rng);
    pool[j] = m.df_apply(a, pool[j], table[pick_op(rng)]);
  }
  return pool.front();
}

std::vector<bool> truth_table(const Bdd &f, std::span<const Label> labels) {
  for (Label l : var_levels(f))
    if (std::find(labels.begin(), labels.end(), l) == labels.end())
      throw EngineError("truth table labels do not cover x" + std::to_string(l));
  std::size_t k = labels.size();
  std::vector<bool> out(std::size_t{1} << k);
  std::unordered_map<Label, std::size_t> pos;
  for (std::size_t i = 0; i < k; ++i)
    pos[labels[i]] = i;
  for (std::size_t a = 0; a < out.size(); ++a)
    out[a] = eval(f, [&](Label l) { return ((a >> pos.at(l)) & 1) != 0; });
  return out;
}

std::vector<bool> project(const std::vector<bool> &table, std::span<const Label> labels,
                          const std::set<Label> &vars, bool universal) {
  std::vector<bool> out = table;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!vars.contains(labels[i]))
      continue;
    std::size_t bit = std::size_t{1} << i;
    for (std::size_t a = 0; a < out.size(); ++a) {
      bool v0 = out[a & ~bit], v1 = out[a | bit];
      out[a] = universal ? (v0 && v1) : (v0 || v1);
    }
  }
  return out;
}

} // namespace levelbdd::oracle
