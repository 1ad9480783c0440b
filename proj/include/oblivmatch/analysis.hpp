#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "oblivmatch/oracle.hpp"
#include "oblivmatch/ranking.hpp"
#include "oblivmatch/types.hpp"

namespace oblivmatch {

enum class Algorithm { Ranking, Greedy };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algo);

// Two-sided 99% normal quantile used for every confidence interval here.
inline constexpr double kZ99 = 2.5758293035489004;

// 1 - 1/e, the guarantee all estimates are measured against.
inline constexpr double kRatioTarget = 0.6321205588285577;

struct ConservationResult {
  double residual;   // |sum of gains - matching weight|
  double tolerance;  // 1e-9 * (1 + matching weight)
  bool pass;
};

/// The duals of a trial must add up to exactly what the matching weighs.
ConservationResult gain_conservation_check(const Matching& matching, const GainShares& gains);

/// Weight of the edge that `u` ends up matched to when ranking runs with the
/// given full rank vector on fixed bits; 0 if u stays unmatched.
double matched_weight_of(const BipartiteInstance& instance, const BitMatrix& bits,
                         const RankVector& ranks, int u);

struct MonotonicityResult {
  bool pass;
  int first_violation;  // grid index whose successor rises, -1 if none
  std::vector<double> grid;
  std::vector<double> profile;  // matched weight of u at each grid rank
};

/// Sweeps y_u over grid_size equally spaced points of [0,1], all other ranks
/// fixed, and checks the matched weight never increases (beyond 1e-12). A
/// rise is an implementation bug, not bad luck: the profile is provably
/// non-increasing.
MonotonicityResult monotonicity_check(const BipartiteInstance& instance, const BitMatrix& bits,
                                      const RankVector& other_ranks, int u, int grid_size);

struct MonotonicityViolated : std::logic_error {
  using std::logic_error::logic_error;
};

struct MarginalRank {
  double theta;
  int left;
  int right;
  RankVector other_ranks;  // the entry at `left` is ignored
};

/// Threshold rank for the reference pair (u,v): below it u matches weight
/// >= w_uv, above it less. Located by bisection to absolute tolerance tol
/// after a monotonicity pre-check (MonotonicityViolated otherwise). Returns
/// 0 when even y_u = 0 falls short and 1 when y_u = 1 still reaches w_uv.
/// Where the profile sits exactly at w_uv over an interval, the supremum of
/// the >=-region is returned.
MarginalRank find_marginal_rank(const BipartiteInstance& instance, const BitMatrix& bits,
                                const RankVector& other_ranks, int u, int v, double tol = 1e-6);

/// Dense reference for find_marginal_rank: evaluates the matched weight at
/// n_points equally spaced ranks and brackets the drop directly.
double marginal_rank_grid_sweep(const BipartiteInstance& instance, const BitMatrix& bits,
                                const RankVector& other_ranks, int u, int v, int n_points);

struct GainCheckResult {
  int n_samples;
  int violations;
  // Smallest observed slack against each bound, already including the
  // numerical allowances; negative means a violation.
  double worst_left_margin;
  double worst_right_margin;
  bool pass;
};

/// Samples y_u across [0,1) and asserts the two dual bounds: below theta the
/// left share must reach g(y_u) * w_uv, and on every sample the right share
/// must reach (1 - g(theta)) * w_uv. theta is only known to theta_tol, so
/// samples within 2 * theta_tol of it skip the left bound and the right
/// floor gets w_uv * theta_tol of slack. The pair must be a present edge;
/// the right bound is about the partner v ends up with and is vacuous
/// otherwise.
GainCheckResult marginal_rank_gain_check(const BipartiteInstance& instance, const BitMatrix& bits,
                                         const RankVector& other_ranks, int u, int v, double theta,
                                         int n_samples, std::uint64_t seed,
                                         double theta_tol = 1e-6);

/// The dual-feasibility integral in closed form: integral of the gain
/// fraction over [0,theta] plus its complement at theta. Equal to 1 - 1/e
/// for every theta, which is what makes the guarantee rank-independent.
/// Cross-checked against Simpson quadrature to 1e-10 on every call; a
/// disagreement throws logic_error.
double analytic_bound(double theta);

/// The quadrature side of the cross-check, exposed for tests.
double analytic_bound_quadrature(double theta);

struct DualEdgeRow {
  int left;
  int right;
  double weight;
  double estimate;       // Monte Carlo mean of alpha_u + alpha_v
  double ci_half_width;  // 99%
  double target;         // kRatioTarget * weight
  bool pass;             // estimate + ci >= target - ci
};

struct DualFeasibilityReport {
  std::vector<DualEdgeRow> rows;  // one per edge of the optimal matching
  double opt_value;
  int n_samples;
  bool pass;
};

/// Estimates E[alpha_u + alpha_v] for every edge of a maximum-weight
/// matching of (instance, bits) over n_samples fresh rank vectors. One
/// ranking run per sample, shared by all edges. n_samples must be at least
/// 100; narrower estimates say nothing at 99% confidence.
DualFeasibilityReport estimate_dual_feasibility(const BipartiteInstance& instance,
                                                const BitMatrix& bits, int n_samples,
                                                std::uint64_t seed, int n_threads = 0);

struct TrialRow {
  long trial;
  std::uint64_t seed;  // per-trial base seed, mixed from (master, trial)
  double alg_weight;
  double opt_weight;
  long n_probes;
};

/// Worker count: an explicit request wins but OBLIV_MATCH_THREADS caps it;
/// with no request (0) the env var, or failing that the hardware count,
/// decides.
int resolve_threads(int requested);

/// n_trials independent trials: fresh bits (for stochastic laws) and fresh
/// ranks per trial, per-trial optimum on the same bits. Trials are split
/// across threads into preallocated row slots and every value depends only
/// on (master_seed, trial), so the rows are bit-identical for every thread
/// count.
std::vector<TrialRow> run_trials(const Problem& problem, long n_trials,
                                 std::uint64_t master_seed, Algorithm algo, int n_threads = 0);

struct RatioEstimate {
  double alg_mean;
  double opt_mean;
  double ratio;          // alg_mean / opt_mean; 1 when both means are zero
  double ci_half_width;  // 99%, delta method on the ratio of means
  long n_trials;
};

RatioEstimate summarize_ratio(const std::vector<TrialRow>& rows);

RatioEstimate estimate_ratio(const Problem& problem, long n_trials, std::uint64_t master_seed,
                             Algorithm algo = Algorithm::Ranking, int n_threads = 0);

/// True iff the schedule is exactly what build_schedule would produce for
/// (instance, ranks): every positive pair once, keys correct to 1e-12,
/// non-increasing, ties in (left, right) order.
bool check_schedule_conformance(const ProbeSchedule& schedule, const BipartiteInstance& instance,
                                const RankVector& ranks);

/// True iff the probe log is a subsequence of the schedule and every
/// schedule entry missing from the log had a matched endpoint at its
/// scheduled time (replayed from the logged outcomes).
bool probe_log_conforms(const ProbeSchedule& schedule, const std::vector<ProbeRecord>& log);

struct CheckRow {
  std::string name;
  bool pass;
  double margin;  // distance to the failure boundary; negative on failure
  std::string details;
};

struct VerifyConfig {
  long n_trials = 10000;      // conservation trials
  int n_rank_samples = 1000;  // dual-feasibility samples
  int grid = 101;             // monotonicity grid and analytic-bound theta grid
  int n_configs = 12;         // monotonicity / marginal-rank spot checks
  std::uint64_t seed = 1;
  double theta_tol = 1e-6;
  int n_threads = 0;
};

struct VerifyReport {
  std::vector<CheckRow> checks;
  bool pass;
};

/// The whole battery on one problem: conservation, monotonicity,
/// marginal-rank structure, gain bounds, dual feasibility, analytic bound.
VerifyReport run_verification(const Problem& problem, const VerifyConfig& config);

// Report serialization. Column orders and field names are frozen; see the
// README before changing anything downstream tooling may parse.
void trial_rows_csv(std::ostream& os, const std::vector<TrialRow>& rows);
std::string trial_rows_json(const std::vector<TrialRow>& rows, const RatioEstimate& summary);
std::string ratio_csv(const RatioEstimate& est);
std::string ratio_json(const RatioEstimate& est);
std::string dual_report_csv(const DualFeasibilityReport& report);
std::string dual_report_json(const DualFeasibilityReport& report);
std::string verify_report_csv(const VerifyReport& report);
std::string verify_report_json(const VerifyReport& report);

}  // namespace oblivmatch
