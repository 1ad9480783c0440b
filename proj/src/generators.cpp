#include "oblivmatch/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "oblivmatch/rng.hpp"

namespace oblivmatch {

namespace {

void check_dist(const WeightDist& dist) {
  if (const auto* uni = std::get_if<UniformWeights>(&dist)) {
    if (!(std::isfinite(uni->lo) && std::isfinite(uni->hi)) || uni->lo > uni->hi ||
        uni->lo < 0.0)
      throw std::invalid_argument("invalid uniform weight bounds");
  } else {
    const auto& c = std::get<ConstantWeights>(dist);
    if (!std::isfinite(c.value) || c.value < 0.0)
      throw std::invalid_argument("invalid constant weight");
  }
}

double draw_weight(const WeightDist& dist, Rng& rng) {
  if (const auto* uni = std::get_if<UniformWeights>(&dist))
    return uni->lo + (uni->hi - uni->lo) * rng.uniform01();
  return std::get<ConstantWeights>(dist).value;
}

}  // namespace

Problem generate_random(Eigen::Index n_left, Eigen::Index n_right,
                        const WeightDist& dist, double edge_prob,
                        std::uint64_t seed) {
  if (n_left < 1 || n_right < 1) throw std::invalid_argument("vertex counts must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw std::invalid_argument("probability out of range");
  check_dist(dist);

  // Separate streams so changing the edge draw never shifts the weights.
  Rng weight_rng(mix_seed(seed, 0));
  Rng edge_rng(mix_seed(seed, 1));

  BipartiteInstance instance;
  instance.weights.resize(n_left, n_right);
  for (Eigen::Index u = 0; u < n_left; ++u)
    for (Eigen::Index v = 0; v < n_right; ++v)
      instance.weights(u, v) = draw_weight(dist, weight_rng);

  BitMatrix bits(n_left, n_right);
  for (Eigen::Index u = 0; u < n_left; ++u)
    for (Eigen::Index v = 0; v < n_right; ++v)
      bits(u, v) = edge_rng.bernoulli(edge_prob);

  return Problem{std::move(instance), AdversarialBits{std::move(bits)}};
}

Problem generate_upper_triangular(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("vertex counts must be >= 1");
  BipartiteInstance instance;
  instance.weights = WeightMatrix::Ones(n, n);
  BitMatrix bits(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      bits(i, j) = i <= j;
  return Problem{std::move(instance), AdversarialBits{std::move(bits)}};
}

}  // namespace oblivmatch
