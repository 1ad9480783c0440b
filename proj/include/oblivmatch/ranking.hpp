#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oblivmatch/probe_env.hpp"
#include "oblivmatch/types.hpp"

namespace oblivmatch {

/// Share of the edge weight kept by the left endpoint when it matches at
/// rank y: e^(y-1). Non-decreasing on [0,1] with range [1/e, 1]. The
/// complement 1 - gain_fraction(y) scales the probe-order keys, so low-rank
/// vertices are probed earlier and keep more of the weight.
double gain_fraction(double y);

/// Any non-decreasing [0,1] -> [0,1] function may be swapped in for
/// experiments; gain_fraction is the analyzed default.
using GainFn = std::function<double(double)>;

/// One uniform [0,1) rank per left vertex, i.i.d., deterministic in seed.
RankVector draw_ranks(Eigen::Index n_left, std::uint64_t seed);

struct ScheduleEntry {
  int left;
  int right;
  double perturbed_weight;
};

using ProbeSchedule = std::vector<ScheduleEntry>;

/// Every positive-weight pair keyed by (1 - gain(y_u)) * w_uv, sorted
/// descending. Ties broken by (left, right) so runs are reproducible.
/// Zero-weight pairs are omitted: committing them can only block vertices.
ProbeSchedule build_schedule(const BipartiteInstance& instance, const RankVector& ranks,
                             const GainFn& gain = gain_fraction);

struct RankingOutcome {
  Matching matching;
  GainShares gains;
  ProbeSchedule schedule;
};

/// Walks the schedule, skipping pairs with a matched endpoint and probing
/// the rest. When (u,v) matches, the duals are set once:
///   left gain  = gain(y_u) * w_uv
///   right gain = (1 - gain(y_u)) * w_uv
/// so the duals of each committed pair sum to its weight.
RankingOutcome run_ranking(const BipartiteInstance& instance, ProbeEnv& env,
                           const RankVector& ranks, const GainFn& gain = gain_fraction);

/// Baseline: probes positive-weight pairs in descending raw weight, ties by
/// (left, right).
Matching run_greedy(const BipartiteInstance& instance, ProbeEnv& env);

}  // namespace oblivmatch
