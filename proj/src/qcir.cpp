#include "levelbdd/qcir.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "levelbdd/sweep.hpp"

namespace levelbdd::qcir {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &ch : out)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

// Splits "kw(args)" into the keyword and the text between the parentheses.
std::pair<std::string, std::string_view> call(std::string_view s, int line) {
  auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')')
    throw ParseError(line, "expected '<keyword>(...)'");
  return {lower(trim(s.substr(0, open))), s.substr(open + 1, s.size() - open - 2)};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty())
    return out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

Lit parse_lit(std::string_view s, int line) {
  Lit l;
  if (!s.empty() && s.front() == '-') {
    l.negated = true;
    s = trim(s.substr(1));
  }
  if (!valid_name(s))
    throw ParseError(line, "bad literal '" + std::string(s) + "'");
  l.name = std::string(s);
  return l;
}

} // namespace

Circuit parse_qcir(std::string_view text) {
  Circuit c;
  bool have_output = false;
  int output_line = 0;
  std::unordered_map<std::string, int> gate_line;
  std::unordered_set<std::string> bound;
  int line_no = 0;
  bool first_statement = true;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::string_view s = trim(raw);
    if (first_statement && !s.empty() && lower(s).rfind("#qcir-g14", 0) == 0) {
      first_statement = false;
      continue;
    }
    if (auto hash = s.find('#'); hash != std::string_view::npos)
      s = trim(s.substr(0, hash));
    if (s.empty())
      continue;
    first_statement = false;

    if (auto eq = s.find('='); eq != std::string_view::npos) {
      Gate g;
      g.name = std::string(trim(s.substr(0, eq)));
      if (!valid_name(g.name))
        throw ParseError(line_no, "bad gate name '" + g.name + "'");
      auto [kw, body] = call(trim(s.substr(eq + 1)), line_no);
      if (kw == "exists" || kw == "forall")
        throw ParseError(line_no, "quantifier gates are not supported (prenex form only)");
      if (kw == "and")
        g.kind = GateKind::and_gate;
      else if (kw == "or")
        g.kind = GateKind::or_gate;
      else if (kw == "xor")
        g.kind = GateKind::xor_gate;
      else if (kw == "ite")
        g.kind = GateKind::ite_gate;
      else
        throw ParseError(line_no, "unsupported gate '" + kw + "'");
      for (std::string_view a : split(body, ','))
        g.args.push_back(parse_lit(a, line_no));
      if (g.kind == GateKind::xor_gate && g.args.size() != 2)
        throw ParseError(line_no, "xor takes two arguments");
      if (g.kind == GateKind::ite_gate && g.args.size() != 3)
        throw ParseError(line_no, "ite takes three arguments");
      if (gate_line.contains(g.name) || bound.contains(g.name))
        throw ParseError(line_no, "'" + g.name + "' defined twice");
      gate_line[g.name] = line_no;
      c.gates.push_back(std::move(g));
      continue;
    }

    auto [kw, body] = call(s, line_no);
    if (kw == "exists" || kw == "forall") {
      if (have_output || !c.gates.empty())
        throw ParseError(line_no, "quantifier block after the output statement");
      Block b{kw == "exists" ? Quant::exists : Quant::forall, {}};
      for (std::string_view v : split(body, ',')) {
        if (!valid_name(v))
          throw ParseError(line_no, "bad variable '" + std::string(v) + "'");
        if (!bound.insert(std::string(v)).second)
          throw ParseError(line_no, "variable '" + std::string(v) + "' bound twice");
        b.vars.emplace_back(v);
      }
      c.prenex.push_back(std::move(b));
    } else if (kw == "free") {
      throw ParseError(line_no, "free variables are not supported (closed formulas only)");
    } else if (kw == "output") {
      if (have_output)
        throw ParseError(line_no, "second output statement");
      c.output = parse_lit(trim(body), line_no);
      have_output = true;
      output_line = line_no;
    } else {
      throw ParseError(line_no, "unknown statement '" + kw + "'");
    }
  }
  if (!have_output)
    throw ParseError(0, "missing output statement");

  for (const std::string &v : bound)
    if (gate_line.contains(v))
      throw ParseError(gate_line[v], "'" + v + "' is both a variable and a gate");
  auto check = [&](const Lit &l, int line) {
    if (!bound.contains(l.name) && !gate_line.contains(l.name))
      throw ParseError(line, "free variable '" + l.name + "'");
  };
  check(c.output, output_line);
  for (const Gate &g : c.gates)
    for (const Lit &l : g.args)
      check(l, gate_line[g.name]);

  // Cycle check: iterative three-colour DFS over gate references.
  std::unordered_map<std::string, const Gate *> by_name;
  for (const Gate &g : c.gates)
    by_name[g.name] = &g;
  std::unordered_map<std::string, int> colour;
  for (const Gate &root : c.gates) {
    if (colour[root.name] != 0)
      continue;
    std::vector<std::pair<const Gate *, std::size_t>> stack{{&root, 0}};
    colour[root.name] = 1;
    while (!stack.empty()) {
      auto &[g, i] = stack.back();
      if (i == g->args.size()) {
        colour[g->name] = 2;
        stack.pop_back();
        continue;
      }
      const std::string &n = g->args[i++].name;
      auto it = by_name.find(n);
      if (it == by_name.end())
        continue;
      if (colour[n] == 1)
        throw ParseError(gate_line[n], "cyclic reference through gate '" + n + "'");
      if (colour[n] == 0) {
        colour[n] = 1;
        stack.emplace_back(it->second, 0);
      }
    }
  }
  return c;
}

std::map<std::string, Label> dfs_var_order(const Circuit &c) {
  std::unordered_map<std::string, const Gate *> by_name;
  for (const Gate &g : c.gates)
    by_name[g.name] = &g;
  std::map<std::string, Label> out;
  std::unordered_set<std::string> seen;
  auto visit_var = [&](const std::string &n) {
    if (!out.contains(n))
      out.emplace(n, static_cast<Label>(out.size()));
  };
  // Pre-order, children left to right.
  std::vector<std::string> stack{c.output.name};
  while (!stack.empty()) {
    std::string n = std::move(stack.back());
    stack.pop_back();
    auto it = by_name.find(n);
    if (it == by_name.end()) {
      visit_var(n);
      continue;
    }
    if (!seen.insert(n).second)
      continue;
    const auto &args = it->second->args;
    for (auto a = args.rbegin(); a != args.rend(); ++a)
      stack.push_back(a->name);
  }
  for (const Block &b : c.prenex)
    for (const std::string &v : b.vars)
      visit_var(v);
  return out;
}

std::vector<Block> merge_blocks(const std::vector<Block> &prenex) {
  std::vector<Block> out;
  for (const Block &b : prenex) {
    if (!out.empty() && out.back().quant == b.quant)
      out.back().vars.insert(out.back().vars.end(), b.vars.begin(), b.vars.end());
    else
      out.push_back(b);
  }
  return out;
}

bool solve(const Circuit &c, const QuantConfig &cfg, Stats *stats) {
  std::map<std::string, Label> order = dfs_var_order(c);
  std::unordered_map<std::string, const Gate *> by_name;
  for (const Gate &g : c.gates)
    by_name[g.name] = &g;

  // Post-order evaluation of the gates reachable from the output.
  std::unordered_map<std::string, Bdd> value;
  auto lit = [&](const Lit &l) {
    auto it = value.find(l.name);
    Bdd b = it != value.end() ? it->second : make_var(order.at(l.name));
    return l.negated ? bdd_not(b) : b;
  };
  std::vector<std::pair<const Gate *, bool>> stack;
  if (auto it = by_name.find(c.output.name); it != by_name.end())
    stack.emplace_back(it->second, false);
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (value.contains(g->name))
      continue;
    if (!expanded) {
      stack.emplace_back(g, true);
      for (auto a = g->args.rbegin(); a != g->args.rend(); ++a)
        if (auto it = by_name.find(a->name); it != by_name.end() && !value.contains(a->name))
          stack.emplace_back(it->second, false);
      continue;
    }
    Bdd r;
    switch (g->kind) {
    case GateKind::and_gate:
      r = make_const(true);
      for (const Lit &a : g->args)
        r = apply(r, lit(a), ops::and_op, stats);
      break;
    case GateKind::or_gate:
      r = make_const(false);
      for (const Lit &a : g->args)
        r = apply(r, lit(a), ops::or_op, stats);
      break;
    case GateKind::xor_gate:
      r = apply(lit(g->args[0]), lit(g->args[1]), ops::xor_op, stats);
      break;
    case GateKind::ite_gate:
      r = ite(lit(g->args[0]), lit(g->args[1]), lit(g->args[2]));
      break;
    }
    value.emplace(g->name, std::move(r));
  }

  Bdd f = lit(c.output);
  std::vector<Block> blocks = merge_blocks(c.prenex);
  for (auto b = blocks.rbegin(); b != blocks.rend() && !f.is_const(); ++b) {
    std::set<Label> vars;
    for (const std::string &v : b->vars)
      vars.insert(order.at(v));
    f = b->quant == Quant::exists ? exists(f, vars, cfg, stats) : forall(f, vars, cfg, stats);
  }
  if (!f.is_const())
    throw EngineError("formula is not closed");
  return f.value();
}

} // namespace levelbdd::qcir
