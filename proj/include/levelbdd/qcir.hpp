/// @file  qcir.hpp
/// @brief QCIR-G14 parser (prenex, and/or/xor/ite gates) and a BDD-based
///        QBF solver.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "levelbdd/core.hpp"
#include "levelbdd/quantify.hpp"

namespace levelbdd::qcir {

enum class Quant { exists, forall };

struct Block {
  Quant quant;
  std::vector<std::string> vars;

  friend bool operator==(const Block &, const Block &) = default;
};

struct Lit {
  std::string name;
  bool negated = false;

  friend bool operator==(const Lit &, const Lit &) = default;
};

enum class GateKind { and_gate, or_gate, xor_gate, ite_gate };

struct Gate {
  std::string name;
  GateKind kind;
  std::vector<Lit> args;

  friend bool operator==(const Gate &, const Gate &) = default;
};

/// A closed prenex circuit. Gates are stored in definition order; any gate
/// may reference any other as long as the references are acyclic.
struct Circuit {
  std::vector<Block> prenex;
  std::vector<Gate> gates;
  Lit output;
};

class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string &what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        _line(line) {}
  /// 1-based line of the offending statement, 0 for whole-file errors.
  int line() const noexcept { return _line; }

private:
  int _line;
};

/// Throws ParseError on syntax errors, unsupported or non-prenex gates,
/// unbound variables, undefined or duplicate names and cyclic references.
Circuit parse_qcir(std::string_view text);

/// Labels in first-visit order of a left-to-right depth-first traversal from
/// the output; variables only bound in the prenex come last, in prenex order.
std::map<std::string, Label> dfs_var_order(const Circuit &c);

/// Concatenates adjacent blocks with the same quantifier.
std::vector<Block> merge_blocks(const std::vector<Block> &prenex);

/// Builds the matrix bottom-up and resolves the prenex from the innermost
/// block outwards.
bool solve(const Circuit &c, const QuantConfig &cfg = {}, Stats *stats = nullptr);

} // namespace levelbdd::qcir
