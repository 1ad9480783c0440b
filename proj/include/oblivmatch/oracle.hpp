#pragma once

#include "oblivmatch/types.hpp"

namespace oblivmatch {

struct OptimalResult {
  Matching matching;  // witness, present edges only
  double value = 0.0; // equals matching.total_weight
};

/// Exact maximum-weight matching of the realized subgraph. Kuhn-Munkres on
/// the square-padded profit matrix; absent pairs and padding get profit 0,
/// which is equivalent to leaving vertices unmatched since weights are
/// nonnegative. Dummy vertices never appear in the witness.
OptimalResult max_weight_matching(const BipartiteInstance& instance,
                                  const BitMatrix& bits);

/// Exact optimum by dynamic programming over subsets of the smaller side,
/// independent of the assignment-solver path. Requires
/// min(n_left, n_right) <= 10.
OptimalResult brute_force_mwm(const BipartiteInstance& instance,
                              const BitMatrix& bits);

}  // namespace oblivmatch
