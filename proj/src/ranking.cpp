#include "oblivmatch/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oblivmatch/rng.hpp"

namespace oblivmatch {

double gain_fraction(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("rank outside [0,1]");
  return std::exp(y - 1.0);
}

RankVector draw_ranks(Eigen::Index n_left, std::uint64_t seed) {
  RankVector ranks(n_left);
  Rng rng(seed);
  for (Eigen::Index u = 0; u < n_left; ++u) ranks[u] = rng.uniform01();
  return ranks;
}

namespace {

void require_ranks(const BipartiteInstance& instance, const RankVector& ranks) {
  if (ranks.size() != instance.n_left())
    throw std::invalid_argument("rank vector size does not match n_left");
  for (Eigen::Index u = 0; u < ranks.size(); ++u)
    if (!(ranks[u] >= 0.0 && ranks[u] <= 1.0))
      throw std::invalid_argument("rank outside [0,1]");
}

bool schedule_before(const ScheduleEntry& a, const ScheduleEntry& b) {
  if (a.perturbed_weight != b.perturbed_weight)
    return a.perturbed_weight > b.perturbed_weight;
  if (a.left != b.left) return a.left < b.left;
  return a.right < b.right;
}

}  // namespace

ProbeSchedule build_schedule(const BipartiteInstance& instance, const RankVector& ranks,
                             const GainFn& gain) {
  require_ranks(instance, ranks);
  const Eigen::Index nl = instance.n_left();
  const Eigen::Index nr = instance.n_right();

  Eigen::VectorXd penalty(nl);  // 1 - gain(y_u), evaluated once per vertex
  for (Eigen::Index u = 0; u < nl; ++u) penalty[u] = 1.0 - gain(ranks[u]);

  ProbeSchedule schedule;
  schedule.reserve(static_cast<std::size_t>(nl * nr));
  for (Eigen::Index u = 0; u < nl; ++u) {
    for (Eigen::Index v = 0; v < nr; ++v) {
      const double w = instance.weights(u, v);
      if (w > 0.0)
        schedule.push_back(ScheduleEntry{static_cast<int>(u), static_cast<int>(v),
                                         penalty[u] * w});
    }
  }
  std::sort(schedule.begin(), schedule.end(), schedule_before);
  return schedule;
}

RankingOutcome run_ranking(const BipartiteInstance& instance, ProbeEnv& env,
                           const RankVector& ranks, const GainFn& gain) {
  if (env.n_left() != instance.n_left() || env.n_right() != instance.n_right())
    throw std::invalid_argument("environment does not match instance shape");

  RankingOutcome out;
  out.schedule = build_schedule(instance, ranks, gain);
  out.gains.left = Eigen::VectorXd::Zero(instance.n_left());
  out.gains.right = Eigen::VectorXd::Zero(instance.n_right());

  const int max_pairs = static_cast<int>(std::min(instance.n_left(), instance.n_right()));
  for (const auto& entry : out.schedule) {
    if (env.left_matched(entry.left) || env.right_matched(entry.right)) continue;
    if (env.probe(entry.left, entry.right) == ProbeOutcome::Matched) {
      const double w = instance.weights(entry.left, entry.right);
      const double f = gain(ranks[entry.left]);
      out.gains.left[entry.left] = f * w;
      out.gains.right[entry.right] = (1.0 - f) * w;
      if (env.matched_pairs() == max_pairs) break;  // one side exhausted
    }
  }
  out.matching = env.final_matching();
  return out;
}

Matching run_greedy(const BipartiteInstance& instance, ProbeEnv& env) {
  if (env.n_left() != instance.n_left() || env.n_right() != instance.n_right())
    throw std::invalid_argument("environment does not match instance shape");

  ProbeSchedule schedule;
  schedule.reserve(static_cast<std::size_t>(instance.n_left() * instance.n_right()));
  for (Eigen::Index u = 0; u < instance.n_left(); ++u) {
    for (Eigen::Index v = 0; v < instance.n_right(); ++v) {
      const double w = instance.weights(u, v);
      if (w > 0.0)
        schedule.push_back(ScheduleEntry{static_cast<int>(u), static_cast<int>(v), w});
    }
  }
  std::sort(schedule.begin(), schedule.end(), schedule_before);

  const int max_pairs = static_cast<int>(std::min(instance.n_left(), instance.n_right()));
  for (const auto& entry : schedule) {
    if (env.left_matched(entry.left) || env.right_matched(entry.right)) continue;
    if (env.probe(entry.left, entry.right) == ProbeOutcome::Matched &&
        env.matched_pairs() == max_pairs)
      break;
  }
  return env.final_matching();
}

}  // namespace oblivmatch
