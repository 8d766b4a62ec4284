// Shared helpers for the test binaries.
#pragma once

#include <random>
#include <vector>

#include "levelbdd/oracle.hpp"

namespace levelbdd::fixtures {

inline oracle::Manager::Ref random_function(oracle::Manager &m, std::mt19937_64 &rng,
                                            Label vars, int leaves) {
  return oracle::random_function(m, rng, vars, leaves);
}

inline Bdd random_bdd(oracle::Manager &m, std::mt19937_64 &rng, Label vars, int leaves) {
  return m.to_bdd(oracle::random_function(m, rng, vars, leaves));
}

inline std::vector<Label> iota_labels(Label n) {
  std::vector<Label> out(n);
  for (Label i = 0; i < n; ++i)
    out[i] = i;
  return out;
}

} // namespace levelbdd::fixtures
