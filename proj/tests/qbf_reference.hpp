// Reference QBF evaluator and random QCIR generator for the test binaries.
#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "levelbdd/qcir.hpp"

namespace levelbdd::fixtures {

using namespace levelbdd::qcir;

// Direct semantic evaluation: gates in any acyclic order, prenex by
// recursion over every assignment.
inline bool eval_circuit(const Circuit &c, const std::unordered_map<std::string, bool> &env) {
  std::unordered_map<std::string, const Gate *> gates;
  for (const Gate &g : c.gates)
    gates[g.name] = &g;
  std::unordered_map<std::string, bool> memo;
  std::function<bool(const Lit &)> lit = [&](const Lit &l) -> bool {
    bool v = false;
    if (auto it = env.find(l.name); it != env.end()) {
      v = it->second;
    } else if (auto m = memo.find(l.name); m != memo.end()) {
      v = m->second;
    } else {
      const Gate &g = *gates.at(l.name);
      switch (g.kind) {
      case GateKind::and_gate:
        v = true;
        for (const Lit &a : g.args)
          v = v && lit(a);
        break;
      case GateKind::or_gate:
        v = false;
        for (const Lit &a : g.args)
          v = v || lit(a);
        break;
      case GateKind::xor_gate:
        v = lit(g.args[0]) != lit(g.args[1]);
        break;
      case GateKind::ite_gate:
        v = lit(g.args[0]) ? lit(g.args[1]) : lit(g.args[2]);
        break;
      }
      memo[l.name] = v;
    }
    return l.negated ? !v : v;
  };
  return lit(c.output);
}

inline bool brute_force(const Circuit &c) {
  std::vector<std::pair<Quant, std::string>> vars;
  for (const Block &b : c.prenex)
    for (const std::string &v : b.vars)
      vars.emplace_back(b.quant, v);
  std::unordered_map<std::string, bool> env;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == vars.size())
      return eval_circuit(c, env);
    env[vars[i].second] = false;
    bool a = rec(i + 1);
    if (vars[i].first == Quant::exists ? a : !a)
      return a;
    env[vars[i].second] = true;
    return rec(i + 1);
  };
  return rec(0);
}

inline std::string random_qcir(std::mt19937_64 &rng, int nvars, int ngates) {
  std::ostringstream out;
  out << "#QCIR-G14\n";
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<int> order(nvars);
  for (int i = 0; i < nvars; ++i)
    order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < nvars;) {
    int len = std::uniform_int_distribution<int>(1, 4)(rng);
    out << (coin(rng) ? "exists(" : "forall(");
    for (int k = 0; k < len && i < nvars; ++k, ++i)
      out << (k ? ", " : "") << order[i];
    out << ")\n";
  }
  out << "output(" << (coin(rng) ? "-" : "") << "g" << ngates << ")\n";
  auto operand = [&](int gate) {
    std::string s = coin(rng) ? "-" : "";
    if (gate > 1 && coin(rng))
      return s + "g" + std::to_string(std::uniform_int_distribution<int>(1, gate - 1)(rng));
    return s + std::to_string(std::uniform_int_distribution<int>(1, nvars)(rng));
  };
  for (int g = 1; g <= ngates; ++g) {
    int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    out << "g" << g << " = ";
    if (kind <= 1) {
      out << (kind == 0 ? "and(" : "or(");
      int n = std::uniform_int_distribution<int>(g == ngates ? 1 : 0, 4)(rng);
      // The last gate mixes in its predecessor so most gates are used.
      for (int k = 0; k < n; ++k)
        out << (k ? ", " : "") << (k == 0 && g > 1 ? "g" + std::to_string(g - 1) : operand(g));
      out << ")\n";
    } else if (kind == 2) {
      out << "xor(" << operand(g) << ", " << operand(g) << ")\n";
    } else {
      out << "ite(" << operand(g) << ", " << operand(g) << ", " << operand(g) << ")\n";
    }
  }
  return out.str();
}

} // namespace levelbdd::fixtures
