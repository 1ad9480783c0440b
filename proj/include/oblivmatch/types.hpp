#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace oblivmatch {

using WeightMatrix = Eigen::MatrixXd;
using ProbMatrix = Eigen::MatrixXd;
using BitMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using RankVector = Eigen::VectorXd;

/// The information known to the algorithm: vertex counts and a nonnegative
/// weight for every left-right pair. Which edges actually exist is hidden
/// in the Realization and reachable only through a ProbeEnv.
struct BipartiteInstance {
  WeightMatrix weights;  // n_left x n_right

  Eigen::Index n_left() const { return weights.rows(); }
  Eigen::Index n_right() const { return weights.cols(); }
};

/// Edge set fixed up front by the adversary.
struct AdversarialBits {
  BitMatrix present;
};

/// Each edge exists independently with probability probs(u,v).
struct BernoulliProbs {
  ProbMatrix probs;  // entries in [0,1]
};

/// Emits a full edge-bit matrix per trial. The callable must be a pure
/// function of the seed; arbitrary correlation between edges is allowed.
struct JointSampler {
  Eigen::Index n_left = 0;
  Eigen::Index n_right = 0;
  std::function<BitMatrix(std::uint64_t trial_seed)> draw;
};

using Realization = std::variant<AdversarialBits, BernoulliProbs, JointSampler>;

/// Instance paired with the hidden realization it was generated with.
struct Problem {
  BipartiteInstance instance;
  Realization realization;
};

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (left, right), sorted by left
  double total_weight = 0.0;
};

/// Per-vertex dual values. Zero for unmatched vertices; for each matched
/// pair, left[u] + right[v] equals the edge weight.
struct GainShares {
  Eigen::VectorXd left;
  Eigen::VectorXd right;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const BipartiteInstance& instance);

/// Checks that the realization's shape and parameters fit the instance.
ValidationReport validate_realization(const BipartiteInstance& instance,
                                      const Realization& realization);

Eigen::Index realization_rows(const Realization& realization);
Eigen::Index realization_cols(const Realization& realization);

/// Samples the per-trial edge bits: copies adversarial bits, flips one
/// Bernoulli coin per pair (row-major order), or delegates to the joint
/// sampler. Deterministic in trial_seed.
BitMatrix realize_bits(const Realization& realization, std::uint64_t trial_seed);

/// Joint law with a single coin shared by every edge: with probability p the
/// whole bit matrix is ones, otherwise all zeros. Every edge still has
/// marginal probability p.
JointSampler correlated_coin_sampler(Eigen::Index n_left, Eigen::Index n_right,
                                     double p);

/// Sum of instance weights over the given pairs (in the given order).
double matching_weight(const BipartiteInstance& instance,
                       const std::vector<std::pair<int, int>>& pairs);

/// True iff pairs are vertex-disjoint, use only present edges, and
/// total_weight matches the instance weights to 1e-9.
bool is_valid_matching(const BipartiteInstance& instance, const BitMatrix& bits,
                       const Matching& matching);

}  // namespace oblivmatch
