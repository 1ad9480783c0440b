#pragma once

#include <cstdint>
#include <variant>

#include "oblivmatch/types.hpp"

namespace oblivmatch {

struct UniformWeights {
  double lo = 0.0;
  double hi = 1.0;
};

struct ConstantWeights {
  double value = 1.0;
};

using WeightDist = std::variant<UniformWeights, ConstantWeights>;

/// Random instance with i.i.d. weights from dist and an adversarial
/// realization where each edge is present independently with probability
/// edge_prob. Deterministic in the seed.
Problem generate_random(Eigen::Index n_left, Eigen::Index n_right,
                        const WeightDist& dist, double edge_prob,
                        std::uint64_t seed);

/// n x n unit weights; edge (i,j) present iff i <= j. The realized graph has
/// a perfect matching (the diagonal), so its maximum matching weight is n.
Problem generate_upper_triangular(Eigen::Index n);

}  // namespace oblivmatch
