#include "oblivmatch/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oblivmatch/rng.hpp"

namespace oblivmatch {

namespace {

std::string cell(Eigen::Index u, Eigen::Index v) {
  std::ostringstream os;
  os << "(" << u << "," << v << ")";
  return os.str();
}

}  // namespace

ValidationReport validate_instance(const BipartiteInstance& instance) {
  ValidationReport report;
  if (instance.n_left() < 1) report.violations.push_back("zero dimension: n_left < 1");
  if (instance.n_right() < 1) report.violations.push_back("zero dimension: n_right < 1");
  for (Eigen::Index u = 0; u < instance.n_left(); ++u) {
    for (Eigen::Index v = 0; v < instance.n_right(); ++v) {
      const double w = instance.weights(u, v);
      if (!std::isfinite(w)) {
        report.violations.push_back("non-finite weight at " + cell(u, v));
      } else if (w < 0.0) {
        report.violations.push_back("negative weight at " + cell(u, v));
      }
    }
  }
  return report;
}

ValidationReport validate_realization(const BipartiteInstance& instance,
                                      const Realization& realization) {
  ValidationReport report;
  const Eigen::Index rows = realization_rows(realization);
  const Eigen::Index cols = realization_cols(realization);
  if (rows != instance.n_left() || cols != instance.n_right()) {
    std::ostringstream os;
    os << "dimension mismatch: realization is " << rows << "x" << cols
       << ", instance is " << instance.n_left() << "x" << instance.n_right();
    report.violations.push_back(os.str());
  }
  if (const auto* bern = std::get_if<BernoulliProbs>(&realization)) {
    for (Eigen::Index u = 0; u < bern->probs.rows(); ++u) {
      for (Eigen::Index v = 0; v < bern->probs.cols(); ++v) {
        const double p = bern->probs(u, v);
        if (!(p >= 0.0 && p <= 1.0)) {
          report.violations.push_back("probability out of range at " + cell(u, v));
        }
      }
    }
  }
  if (const auto* joint = std::get_if<JointSampler>(&realization)) {
    if (!joint->draw) report.violations.push_back("joint sampler has no draw function");
  }
  return report;
}

Eigen::Index realization_rows(const Realization& realization) {
  if (const auto* adv = std::get_if<AdversarialBits>(&realization)) return adv->present.rows();
  if (const auto* bern = std::get_if<BernoulliProbs>(&realization)) return bern->probs.rows();
  return std::get<JointSampler>(realization).n_left;
}

Eigen::Index realization_cols(const Realization& realization) {
  if (const auto* adv = std::get_if<AdversarialBits>(&realization)) return adv->present.cols();
  if (const auto* bern = std::get_if<BernoulliProbs>(&realization)) return bern->probs.cols();
  return std::get<JointSampler>(realization).n_right;
}

BitMatrix realize_bits(const Realization& realization, std::uint64_t trial_seed) {
  if (const auto* adv = std::get_if<AdversarialBits>(&realization)) {
    return adv->present;
  }
  if (const auto* bern = std::get_if<BernoulliProbs>(&realization)) {
    const auto& probs = bern->probs;
    BitMatrix bits(probs.rows(), probs.cols());
    Rng rng(trial_seed);
    for (Eigen::Index u = 0; u < probs.rows(); ++u)
      for (Eigen::Index v = 0; v < probs.cols(); ++v)
        bits(u, v) = rng.bernoulli(probs(u, v));
    return bits;
  }
  const auto& joint = std::get<JointSampler>(realization);
  if (!joint.draw) throw std::invalid_argument("joint sampler has no draw function");
  BitMatrix bits = joint.draw(trial_seed);
  if (bits.rows() != joint.n_left || bits.cols() != joint.n_right)
    throw std::logic_error("joint sampler emitted bits of the wrong shape");
  return bits;
}

JointSampler correlated_coin_sampler(Eigen::Index n_left, Eigen::Index n_right,
                                     double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability out of range");
  JointSampler sampler;
  sampler.n_left = n_left;
  sampler.n_right = n_right;
  sampler.draw = [n_left, n_right, p](std::uint64_t seed) {
    Rng rng(seed);
    const bool on = rng.bernoulli(p);
    return BitMatrix::Constant(n_left, n_right, on);
  };
  return sampler;
}

double matching_weight(const BipartiteInstance& instance,
                       const std::vector<std::pair<int, int>>& pairs) {
  double total = 0.0;
  for (const auto& [u, v] : pairs) total += instance.weights(u, v);
  return total;
}

bool is_valid_matching(const BipartiteInstance& instance, const BitMatrix& bits,
                       const Matching& matching) {
  std::vector<bool> left_used(static_cast<std::size_t>(instance.n_left()), false);
  std::vector<bool> right_used(static_cast<std::size_t>(instance.n_right()), false);
  for (const auto& [u, v] : matching.pairs) {
    if (u < 0 || u >= instance.n_left() || v < 0 || v >= instance.n_right()) return false;
    if (!bits(u, v)) return false;
    if (left_used[static_cast<std::size_t>(u)] || right_used[static_cast<std::size_t>(v)])
      return false;
    left_used[static_cast<std::size_t>(u)] = true;
    right_used[static_cast<std::size_t>(v)] = true;
  }
  const double expected = matching_weight(instance, matching.pairs);
  return std::abs(matching.total_weight - expected) <= 1e-9 * (1.0 + std::abs(expected));
}

}  // namespace oblivmatch
