#include "oblivmatch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "oblivmatch/io.hpp"
#include "oblivmatch/rng.hpp"

namespace oblivmatch {

using ojson = nlohmann::ordered_json;

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ranking") return Algorithm::Ranking;
  if (name == "greedy") return Algorithm::Greedy;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algo) {
  return algo == Algorithm::Ranking ? "ranking" : "greedy";
}

ConservationResult gain_conservation_check(const Matching& matching, const GainShares& gains) {
  const double total = gains.left.sum() + gains.right.sum();
  ConservationResult res;
  res.residual = std::abs(total - matching.total_weight);
  res.tolerance = 1e-9 * (1.0 + matching.total_weight);
  res.pass = res.residual <= res.tolerance;
  return res;
}

double matched_weight_of(const BipartiteInstance& instance, const BitMatrix& bits,
                         const RankVector& ranks, int u) {
  if (u < 0 || u >= instance.n_left()) throw std::invalid_argument("left vertex out of range");
  ProbeEnv env(instance, bits);
  const RankingOutcome out = run_ranking(instance, env, ranks);
  for (const auto& [l, r] : out.matching.pairs)
    if (l == u) return instance.weights(u, r);
  return 0.0;
}

MonotonicityResult monotonicity_check(const BipartiteInstance& instance, const BitMatrix& bits,
                                      const RankVector& other_ranks, int u, int grid_size) {
  if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
  if (u < 0 || u >= instance.n_left()) throw std::invalid_argument("left vertex out of range");
  if (other_ranks.size() != instance.n_left())
    throw std::invalid_argument("rank vector size mismatch");

  MonotonicityResult res;
  res.grid.reserve(static_cast<std::size_t>(grid_size));
  res.profile.reserve(static_cast<std::size_t>(grid_size));
  RankVector ranks = other_ranks;
  for (int i = 0; i < grid_size; ++i) {
    const double y = static_cast<double>(i) / (grid_size - 1);
    ranks[u] = y;
    res.grid.push_back(y);
    res.profile.push_back(matched_weight_of(instance, bits, ranks, u));
  }
  res.first_violation = -1;
  for (int i = 0; i + 1 < grid_size; ++i) {
    if (res.profile[static_cast<std::size_t>(i) + 1] >
        res.profile[static_cast<std::size_t>(i)] + 1e-12) {
      res.first_violation = i;
      break;
    }
  }
  res.pass = res.first_violation < 0;
  return res;
}

MarginalRank find_marginal_rank(const BipartiteInstance& instance, const BitMatrix& bits,
                                const RankVector& other_ranks, int u, int v, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (u < 0 || u >= instance.n_left()) throw std::invalid_argument("left vertex out of range");
  if (v < 0 || v >= instance.n_right()) throw std::invalid_argument("right vertex out of range");

  const MonotonicityResult pre = monotonicity_check(instance, bits, other_ranks, u, 33);
  if (!pre.pass) {
    std::ostringstream msg;
    msg << "matched-weight profile of left vertex " << u << " rises at grid index "
        << pre.first_violation;
    throw MonotonicityViolated(msg.str());
  }

  const double w_ref = instance.weights(u, v);
  RankVector ranks = other_ranks;
  const auto reaches = [&](double y) {
    ranks[u] = y;
    // The epsilon keeps exact-tie profiles (matched weight == w_ref) on the
    // >=-side, so flat stretches resolve to their supremum.
    return matched_weight_of(instance, bits, ranks, u) >= w_ref - 1e-12;
  };

  MarginalRank out;
  out.left = u;
  out.right = v;
  out.other_ranks = other_ranks;
  if (!reaches(0.0)) {
    out.theta = 0.0;
    return out;
  }
  if (reaches(1.0)) {
    out.theta = 1.0;
    return out;
  }
  double lo = 0.0, hi = 1.0;  // invariant: reaches(lo) and not reaches(hi)
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (reaches(mid) ? lo : hi) = mid;
  }
  out.theta = 0.5 * (lo + hi);
  return out;
}

double marginal_rank_grid_sweep(const BipartiteInstance& instance, const BitMatrix& bits,
                                const RankVector& other_ranks, int u, int v, int n_points) {
  if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");
  const double w_ref = instance.weights(u, v);
  RankVector ranks = other_ranks;
  int last_true = -1;
  int first_false = n_points;
  // Monotone profile, so the first miss ends the scan.
  for (int i = 0; i < n_points; ++i) {
    ranks[u] = static_cast<double>(i) / (n_points - 1);
    if (matched_weight_of(instance, bits, ranks, u) >= w_ref - 1e-12) {
      last_true = i;
    } else {
      first_false = i;
      break;
    }
  }
  if (last_true < 0) return 0.0;
  if (first_false == n_points) return 1.0;
  return 0.5 * (static_cast<double>(last_true) + static_cast<double>(first_false)) /
         (n_points - 1);
}

GainCheckResult marginal_rank_gain_check(const BipartiteInstance& instance, const BitMatrix& bits,
                                         const RankVector& other_ranks, int u, int v, double theta,
                                         int n_samples, std::uint64_t seed, double theta_tol) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta out of range");
  if (u < 0 || u >= instance.n_left()) throw std::invalid_argument("left vertex out of range");
  if (v < 0 || v >= instance.n_right()) throw std::invalid_argument("right vertex out of range");
  if (!bits(u, v)) throw std::invalid_argument("reference pair must be a present edge");

  const double w_ref = instance.weights(u, v);
  const double right_floor = (1.0 - gain_fraction(theta)) * w_ref;
  // theta carries up to theta_tol of bisection error and g has slope <= 1 on
  // [0,1], so the floor may be overstated by w_ref * theta_tol.
  const double right_slack = w_ref * theta_tol + 1e-12 * (1.0 + w_ref);
  const double left_slack = 1e-12 * (1.0 + w_ref);

  GainCheckResult res;
  res.n_samples = n_samples;
  res.violations = 0;
  res.worst_left_margin = std::numeric_limits<double>::infinity();
  res.worst_right_margin = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  RankVector ranks = other_ranks;
  for (int s = 0; s < n_samples; ++s) {
    const double y = rng.uniform01();
    ranks[u] = y;
    ProbeEnv env(instance, bits);
    const RankingOutcome out = run_ranking(instance, env, ranks);
    const double alpha_u = out.gains.left[u];
    const double alpha_v = out.gains.right[v];

    const double right_margin = alpha_v - (right_floor - right_slack);
    res.worst_right_margin = std::min(res.worst_right_margin, right_margin);
    if (right_margin < 0.0) ++res.violations;

    // Within 2 * theta_tol of theta the side of the true threshold is
    // unknowable, so the left bound is not asserted there.
    if (y < theta - 2.0 * theta_tol) {
      const double left_margin = alpha_u - (gain_fraction(y) * w_ref - left_slack);
      res.worst_left_margin = std::min(res.worst_left_margin, left_margin);
      if (left_margin < 0.0) ++res.violations;
    }
  }
  res.pass = res.violations == 0;
  return res;
}

double analytic_bound_quadrature(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta out of range");
  // Composite Simpson; error ~ theta^5 / (180 n^4), orders below the 1e-10
  // agreement the cross-check demands.
  constexpr int kIntervals = 256;
  double integral = 0.0;
  if (theta > 0.0) {
    const double h = theta / kIntervals;
    double acc = gain_fraction(0.0) + gain_fraction(theta);
    for (int i = 1; i < kIntervals; ++i)
      acc += (i % 2 == 1 ? 4.0 : 2.0) * gain_fraction(i * h);
    integral = acc * h / 3.0;
  }
  return integral + (1.0 - gain_fraction(theta));
}

double analytic_bound(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta out of range");
  const double g_theta = std::exp(theta - 1.0);
  const double closed = (g_theta - std::exp(-1.0)) + (1.0 - g_theta);
  const double quad = analytic_bound_quadrature(theta);
  if (std::abs(closed - quad) > 1e-10)
    throw std::logic_error("quadrature disagrees with the closed-form bound");
  return closed;
}

namespace {

// Splits [0, n) into contiguous chunks, one thread per chunk. The work
// callable may only write slots it owns; the first exception wins and is
// rethrown on the caller.
template <typename Fn>
void run_partitioned(long n, int n_threads, Fn&& work) {
  if (n <= 0) return;
  n_threads = static_cast<int>(std::min<long>(n_threads, n));
  if (n_threads <= 1) {
    work(0L, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const long chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const long begin = static_cast<long>(t) * chunk;
    const long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

int resolve_threads(int requested) {
  int cap = 0;
  if (const char* env = std::getenv("OBLIV_MATCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) cap = static_cast<int>(v);
  }
  if (requested >= 1) return cap >= 1 ? std::min(requested, cap) : requested;
  if (cap >= 1) return cap;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

DualFeasibilityReport estimate_dual_feasibility(const BipartiteInstance& instance,
                                                const BitMatrix& bits, int n_samples,
                                                std::uint64_t seed, int n_threads) {
  if (n_samples < 100) throw std::invalid_argument("n_samples must be >= 100");
  const OptimalResult opt = max_weight_matching(instance, bits);
  const auto& edges = opt.matching.pairs;
  const int n_edges = static_cast<int>(edges.size());

  DualFeasibilityReport report;
  report.opt_value = opt.value;
  report.n_samples = n_samples;
  report.pass = true;
  if (n_edges == 0) return report;

  // One ranking run per sample, its duals read off for every edge of the
  // optimum. Samples land in preallocated slots so the thread count cannot
  // change the reduction order.
  Eigen::MatrixXd samples(n_samples, n_edges);
  run_partitioned(n_samples, resolve_threads(n_threads), [&](long begin, long end) {
    for (long s = begin; s < end; ++s) {
      const RankVector ranks =
          draw_ranks(instance.n_left(), mix_seed(seed, static_cast<std::uint64_t>(s)));
      ProbeEnv env(instance, bits);
      const RankingOutcome out = run_ranking(instance, env, ranks);
      for (int e = 0; e < n_edges; ++e)
        samples(s, e) = out.gains.left[edges[static_cast<std::size_t>(e)].first] +
                        out.gains.right[edges[static_cast<std::size_t>(e)].second];
    }
  });

  for (int e = 0; e < n_edges; ++e) {
    DualEdgeRow row;
    row.left = edges[static_cast<std::size_t>(e)].first;
    row.right = edges[static_cast<std::size_t>(e)].second;
    row.weight = instance.weights(row.left, row.right);
    double sum = 0.0;
    for (int s = 0; s < n_samples; ++s) sum += samples(s, e);
    row.estimate = sum / n_samples;
    double ss = 0.0;
    for (int s = 0; s < n_samples; ++s) {
      const double d = samples(s, e) - row.estimate;
      ss += d * d;
    }
    const double variance = ss / (n_samples - 1);
    row.ci_half_width = kZ99 * std::sqrt(variance / n_samples);
    row.target = kRatioTarget * row.weight;
    row.pass = row.estimate + row.ci_half_width >= row.target - row.ci_half_width;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<TrialRow> run_trials(const Problem& problem, long n_trials, std::uint64_t master_seed,
                                 Algorithm algo, int n_threads) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  const ValidationReport vi = validate_instance(problem.instance);
  if (!vi.ok()) throw std::invalid_argument("invalid instance: " + vi.violations.front());
  const ValidationReport vr = validate_realization(problem.instance, problem.realization);
  if (!vr.ok()) throw std::invalid_argument("invalid realization: " + vr.violations.front());

  const BipartiteInstance& instance = problem.instance;

  // Adversarial bits never change between trials; solve the benchmark once.
  std::optional<double> fixed_opt;
  if (const auto* adv = std::get_if<AdversarialBits>(&problem.realization))
    fixed_opt = max_weight_matching(instance, adv->present).value;

  std::vector<TrialRow> rows(static_cast<std::size_t>(n_trials));
  run_partitioned(n_trials, resolve_threads(n_threads), [&](long begin, long end) {
    for (long t = begin; t < end; ++t) {
      const std::uint64_t base = mix_seed(master_seed, static_cast<std::uint64_t>(t));
      BitMatrix bits = realize_bits(problem.realization, mix_seed(base, 0));
      TrialRow& row = rows[static_cast<std::size_t>(t)];
      row.trial = t;
      row.seed = base;
      row.opt_weight = fixed_opt ? *fixed_opt : max_weight_matching(instance, bits).value;
      ProbeEnv env(instance, std::move(bits));
      if (algo == Algorithm::Ranking) {
        const RankVector ranks = draw_ranks(instance.n_left(), mix_seed(base, 1));
        row.alg_weight = run_ranking(instance, env, ranks).matching.total_weight;
      } else {
        row.alg_weight = run_greedy(instance, env).total_weight;
      }
      row.n_probes = static_cast<long>(env.log().size());
    }
  });
  return rows;
}

RatioEstimate summarize_ratio(const std::vector<TrialRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no trial rows");
  const long n = static_cast<long>(rows.size());
  double alg_sum = 0.0, opt_sum = 0.0;
  for (const TrialRow& row : rows) {
    alg_sum += row.alg_weight;
    opt_sum += row.opt_weight;
  }
  RatioEstimate est;
  est.n_trials = n;
  est.alg_mean = alg_sum / static_cast<double>(n);
  est.opt_mean = opt_sum / static_cast<double>(n);
  if (est.opt_mean == 0.0) {
    // No realized edges at all: the optimum is empty and so is the bar.
    est.ratio = 1.0;
    est.ci_half_width = 0.0;
    return est;
  }
  est.ratio = est.alg_mean / est.opt_mean;
  if (n < 2) {
    est.ci_half_width = 0.0;
    return est;
  }
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (const TrialRow& row : rows) {
    const double da = row.alg_weight - est.alg_mean;
    const double db = row.opt_weight - est.opt_mean;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  const double var_a = saa / static_cast<double>(n - 1);
  const double var_b = sbb / static_cast<double>(n - 1);
  const double cov = sab / static_cast<double>(n - 1);
  const double r = est.ratio;
  const double m = est.opt_mean;
  // Delta method for a ratio of means.
  const double var_ratio = (var_a - 2.0 * r * cov + r * r * var_b) / (m * m * static_cast<double>(n));
  est.ci_half_width = var_ratio > 0.0 ? kZ99 * std::sqrt(var_ratio) : 0.0;
  return est;
}

RatioEstimate estimate_ratio(const Problem& problem, long n_trials, std::uint64_t master_seed,
                             Algorithm algo, int n_threads) {
  return summarize_ratio(run_trials(problem, n_trials, master_seed, algo, n_threads));
}

bool check_schedule_conformance(const ProbeSchedule& schedule, const BipartiteInstance& instance,
                                const RankVector& ranks) {
  if (ranks.size() != instance.n_left()) return false;
  std::size_t expected = 0;
  for (Eigen::Index u = 0; u < instance.n_left(); ++u)
    for (Eigen::Index v = 0; v < instance.n_right(); ++v)
      if (instance.weights(u, v) > 0.0) ++expected;
  if (schedule.size() != expected) return false;

  BitMatrix seen = BitMatrix::Constant(instance.n_left(), instance.n_right(), false);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const ScheduleEntry& e = schedule[k];
    if (e.left < 0 || e.left >= instance.n_left() || e.right < 0 || e.right >= instance.n_right())
      return false;
    const double w = instance.weights(e.left, e.right);
    if (!(w > 0.0)) return false;
    if (seen(e.left, e.right)) return false;
    seen(e.left, e.right) = true;
    const double key = (1.0 - gain_fraction(ranks[e.left])) * w;
    if (std::abs(e.perturbed_weight - key) > 1e-12 * (1.0 + std::abs(key))) return false;
    if (k > 0) {
      const ScheduleEntry& prev = schedule[k - 1];
      if (e.perturbed_weight > prev.perturbed_weight) return false;
      if (e.perturbed_weight == prev.perturbed_weight &&
          std::pair(prev.left, prev.right) >= std::pair(e.left, e.right))
        return false;
    }
  }
  return true;
}

bool probe_log_conforms(const ProbeSchedule& schedule, const std::vector<ProbeRecord>& log) {
  int n_left = 0, n_right = 0;
  for (const ScheduleEntry& e : schedule) {
    n_left = std::max(n_left, e.left + 1);
    n_right = std::max(n_right, e.right + 1);
  }
  for (const ProbeRecord& r : log) {
    n_left = std::max(n_left, r.left + 1);
    n_right = std::max(n_right, r.right + 1);
  }
  std::vector<char> left_matched(static_cast<std::size_t>(n_left), 0);
  std::vector<char> right_matched(static_cast<std::size_t>(n_right), 0);
  std::size_t k = 0;
  for (const ScheduleEntry& e : schedule) {
    const std::size_t ul = static_cast<std::size_t>(e.left);
    const std::size_t vr = static_cast<std::size_t>(e.right);
    if (k < log.size() && log[k].left == e.left && log[k].right == e.right) {
      if (left_matched[ul] || right_matched[vr]) return false;  // probed a dead pair
      if (log[k].outcome == ProbeOutcome::Matched) {
        left_matched[ul] = 1;
        right_matched[vr] = 1;
      }
      ++k;
    } else if (!left_matched[ul] && !right_matched[vr]) {
      return false;  // skipped a pair that was still live
    }
  }
  return k == log.size();
}

namespace {

std::string fmt_margin(double x) { return fmt_double(x); }

CheckRow conservation_check(const Problem& problem, const VerifyConfig& config) {
  const BipartiteInstance& instance = problem.instance;
  const long n_trials = std::max(1L, config.n_trials);
  double max_residual = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  long failures = 0;
  for (long t = 0; t < n_trials; ++t) {
    const std::uint64_t base = mix_seed(config.seed, static_cast<std::uint64_t>(t));
    BitMatrix bits = realize_bits(problem.realization, mix_seed(base, 0));
    const RankVector ranks = draw_ranks(instance.n_left(), mix_seed(base, 1));
    ProbeEnv env(instance, std::move(bits));
    const RankingOutcome out = run_ranking(instance, env, ranks);
    const ConservationResult res = gain_conservation_check(out.matching, out.gains);
    max_residual = std::max(max_residual, res.residual);
    min_margin = std::min(min_margin, res.tolerance - res.residual);
    if (!res.pass) ++failures;
  }
  CheckRow row;
  row.name = "conservation";
  row.pass = failures == 0;
  row.margin = min_margin;
  std::ostringstream details;
  details << n_trials << " trials; max residual " << fmt_double(max_residual) << "; " << failures
          << " failures";
  row.details = details.str();
  return row;
}

struct SpotConfig {
  BitMatrix bits;
  RankVector ranks;
  int u;
  int v;
};

std::vector<SpotConfig> draw_spot_configs(const Problem& problem, const VerifyConfig& config) {
  const BipartiteInstance& instance = problem.instance;
  const std::uint64_t stream = mix_seed(config.seed, 5107);
  const int n_configs = std::max(1, config.n_configs);
  std::vector<SpotConfig> out;
  out.reserve(static_cast<std::size_t>(n_configs));
  for (int k = 0; k < n_configs; ++k) {
    const std::uint64_t base = mix_seed(stream, static_cast<std::uint64_t>(k));
    SpotConfig sc;
    sc.bits = realize_bits(problem.realization, mix_seed(base, 0));
    sc.ranks = draw_ranks(instance.n_left(), mix_seed(base, 1));
    sc.u = k % static_cast<int>(instance.n_left());
    sc.v = k % static_cast<int>(instance.n_right());
    out.push_back(std::move(sc));
  }
  return out;
}

CheckRow monotonicity_suite(const BipartiteInstance& instance,
                            const std::vector<SpotConfig>& configs, int grid) {
  double max_rise = -std::numeric_limits<double>::infinity();
  int violations = 0;
  for (const SpotConfig& sc : configs) {
    const MonotonicityResult res = monotonicity_check(instance, sc.bits, sc.ranks, sc.u, grid);
    if (!res.pass) ++violations;
    for (std::size_t i = 0; i + 1 < res.profile.size(); ++i)
      max_rise = std::max(max_rise, res.profile[i + 1] - res.profile[i]);
  }
  CheckRow row;
  row.name = "monotonicity";
  row.pass = violations == 0;
  row.margin = 1e-12 - max_rise;
  std::ostringstream details;
  details << configs.size() << " configs; grid " << grid << "; max rise " << fmt_double(max_rise)
          << "; " << violations << " violations";
  row.details = details.str();
  return row;
}

CheckRow marginal_rank_suite(const BipartiteInstance& instance,
                             const std::vector<SpotConfig>& configs, double theta_tol) {
  constexpr int kSweepPoints = 2001;
  const double agree_tol = 0.5 / (kSweepPoints - 1) + 2.0 * theta_tol;
  double max_gap = 0.0;
  int violations = 0;
  std::string error;
  try {
    for (const SpotConfig& sc : configs) {
      const MarginalRank mr =
          find_marginal_rank(instance, sc.bits, sc.ranks, sc.u, sc.v, theta_tol);
      const double swept =
          marginal_rank_grid_sweep(instance, sc.bits, sc.ranks, sc.u, sc.v, kSweepPoints);
      const double gap = std::abs(mr.theta - swept);
      max_gap = std::max(max_gap, gap);
      if (gap > agree_tol) ++violations;
    }
  } catch (const MonotonicityViolated& e) {
    error = e.what();
  }
  CheckRow row;
  row.name = "marginal_rank";
  row.pass = error.empty() && violations == 0;
  row.margin = error.empty() ? agree_tol - max_gap : -1.0;
  std::ostringstream details;
  if (!error.empty()) {
    details << "monotonicity violated: " << error;
  } else {
    details << configs.size() << " configs; bisection vs " << kSweepPoints
            << "-point sweep; max gap " << fmt_double(max_gap) << "; " << violations
            << " violations";
  }
  row.details = details.str();
  return row;
}

CheckRow gain_bounds_suite(const BipartiteInstance& instance,
                           const std::vector<SpotConfig>& configs, const VerifyConfig& config) {
  constexpr int kSamples = 200;
  double min_margin = std::numeric_limits<double>::infinity();
  int violations = 0;
  int checked = 0;
  std::string error;
  try {
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const SpotConfig& sc = configs[k];
      // The dual bounds are stated for a present positive-weight pair; scan for one
      // near (u, v) and skip the config when the realization has none.
      int u = -1, v = -1;
      const Eigen::Index nl = instance.n_left(), nr = instance.n_right();
      for (Eigen::Index du = 0; du < nl && u < 0; ++du) {
        const Eigen::Index uu = (sc.u + du) % nl;
        for (Eigen::Index dv = 0; dv < nr; ++dv) {
          const Eigen::Index vv = (sc.v + dv) % nr;
          if (sc.bits(uu, vv) && instance.weights(uu, vv) > 0.0) {
            u = static_cast<int>(uu);
            v = static_cast<int>(vv);
            break;
          }
        }
      }
      if (u < 0) continue;
      ++checked;
      const MarginalRank mr = find_marginal_rank(instance, sc.bits, sc.ranks, u, v,
                                                 config.theta_tol);
      const GainCheckResult res = marginal_rank_gain_check(
          instance, sc.bits, sc.ranks, u, v, mr.theta, kSamples,
          mix_seed(config.seed, 9000 + static_cast<std::uint64_t>(k)), config.theta_tol);
      violations += res.violations;
      min_margin = std::min({min_margin, res.worst_left_margin, res.worst_right_margin});
    }
  } catch (const MonotonicityViolated& e) {
    error = e.what();
  }
  CheckRow row;
  row.name = "gain_bounds";
  row.pass = error.empty() && violations == 0;
  std::ostringstream details;
  if (!error.empty()) {
    row.margin = -1.0;
    details << "monotonicity violated: " << error;
  } else if (checked == 0) {
    row.margin = 0.0;
    details << "no present positive-weight pair in any sampled realization";
  } else {
    row.margin = min_margin;
    details << checked << " configs x " << kSamples << " samples; min margin "
            << fmt_margin(min_margin) << "; " << violations << " violations";
  }
  row.details = details.str();
  return row;
}

CheckRow dual_feasibility_suite(const Problem& problem, const VerifyConfig& config) {
  const BipartiteInstance& instance = problem.instance;
  BitMatrix bits;
  if (const auto* adv = std::get_if<AdversarialBits>(&problem.realization))
    bits = adv->present;
  else
    bits = realize_bits(problem.realization, mix_seed(config.seed, 99));
  const int n_samples = std::max(100, config.n_rank_samples);
  const DualFeasibilityReport report = estimate_dual_feasibility(
      instance, bits, n_samples, mix_seed(config.seed, 7), config.n_threads);
  CheckRow row;
  row.name = "dual_feasibility";
  row.pass = report.pass;
  std::ostringstream details;
  if (report.rows.empty()) {
    row.margin = 0.0;
    details << "optimum is empty; nothing to bound";
  } else {
    double min_margin = std::numeric_limits<double>::infinity();
    int failures = 0;
    for (const DualEdgeRow& r : report.rows) {
      min_margin = std::min(min_margin, r.estimate + 2.0 * r.ci_half_width - r.target);
      if (!r.pass) ++failures;
    }
    row.margin = min_margin;
    details << report.rows.size() << " optimum edges x " << n_samples << " samples; min margin "
            << fmt_double(min_margin) << "; " << failures << " failures";
  }
  row.details = details.str();
  return row;
}

CheckRow analytic_bound_suite(int grid) {
  const int n = std::max(2, grid);
  double max_dev = 0.0;
  std::string error;
  try {
    for (int i = 0; i < n; ++i) {
      const double theta = static_cast<double>(i) / (n - 1);
      max_dev = std::max(max_dev, std::abs(analytic_bound(theta) - kRatioTarget));
    }
  } catch (const std::logic_error& e) {
    error = e.what();
  }
  CheckRow row;
  row.name = "analytic_bound";
  row.pass = error.empty() && max_dev <= 1e-10;
  row.margin = 1e-10 - max_dev;
  std::ostringstream details;
  if (!error.empty())
    details << error;
  else
    details << n << " theta values; max deviation from 1-1/e " << fmt_double(max_dev);
  row.details = details.str();
  return row;
}

}  // namespace

VerifyReport run_verification(const Problem& problem, const VerifyConfig& config) {
  const ValidationReport vi = validate_instance(problem.instance);
  if (!vi.ok()) throw std::invalid_argument("invalid instance: " + vi.violations.front());
  const ValidationReport vr = validate_realization(problem.instance, problem.realization);
  if (!vr.ok()) throw std::invalid_argument("invalid realization: " + vr.violations.front());

  const int grid = std::max(2, config.grid);
  VerifyReport report;
  report.pass = true;
  const auto add = [&](CheckRow row) {
    report.pass = report.pass && row.pass;
    report.checks.push_back(std::move(row));
  };

  const std::vector<SpotConfig> spots = draw_spot_configs(problem, config);
  add(conservation_check(problem, config));
  add(monotonicity_suite(problem.instance, spots, grid));
  add(marginal_rank_suite(problem.instance, spots, config.theta_tol));
  add(gain_bounds_suite(problem.instance, spots, config));
  add(dual_feasibility_suite(problem, config));
  add(analytic_bound_suite(grid));
  return report;
}

void trial_rows_csv(std::ostream& os, const std::vector<TrialRow>& rows) {
  os << "trial,seed,alg_weight,opt_weight,probes\n";
  for (const TrialRow& r : rows)
    os << r.trial << ',' << r.seed << ',' << fmt_double(r.alg_weight) << ','
       << fmt_double(r.opt_weight) << ',' << r.n_probes << '\n';
}

namespace {

ojson ratio_fields(const RatioEstimate& est) {
  ojson j;
  j["alg_mean"] = est.alg_mean;
  j["opt_mean"] = est.opt_mean;
  j["ratio"] = est.ratio;
  j["ci99_half_width"] = est.ci_half_width;
  j["n_trials"] = est.n_trials;
  return j;
}

}  // namespace

std::string trial_rows_json(const std::vector<TrialRow>& rows, const RatioEstimate& summary) {
  ojson j;
  j["rows"] = ojson::array();
  for (const TrialRow& r : rows) {
    ojson row;
    row["trial"] = r.trial;
    row["seed"] = r.seed;
    row["alg_weight"] = r.alg_weight;
    row["opt_weight"] = r.opt_weight;
    row["probes"] = r.n_probes;
    j["rows"].push_back(std::move(row));
  }
  j["summary"] = ratio_fields(summary);
  return j.dump(2) + "\n";
}

std::string ratio_csv(const RatioEstimate& est) {
  std::ostringstream os;
  os << "alg_mean,opt_mean,ratio,ci99_half_width,n_trials\n"
     << fmt_double(est.alg_mean) << ',' << fmt_double(est.opt_mean) << ','
     << fmt_double(est.ratio) << ',' << fmt_double(est.ci_half_width) << ',' << est.n_trials
     << '\n';
  return os.str();
}

std::string ratio_json(const RatioEstimate& est) { return ratio_fields(est).dump(2) + "\n"; }

std::string dual_report_csv(const DualFeasibilityReport& report) {
  std::ostringstream os;
  os << "left,right,weight,estimate,ci99_half_width,target,pass\n";
  for (const DualEdgeRow& r : report.rows)
    os << r.left << ',' << r.right << ',' << fmt_double(r.weight) << ',' << fmt_double(r.estimate)
       << ',' << fmt_double(r.ci_half_width) << ',' << fmt_double(r.target) << ','
       << (r.pass ? 1 : 0) << '\n';
  return os.str();
}

std::string dual_report_json(const DualFeasibilityReport& report) {
  ojson j;
  j["opt_value"] = report.opt_value;
  j["n_samples"] = report.n_samples;
  j["pass"] = report.pass;
  j["rows"] = ojson::array();
  for (const DualEdgeRow& r : report.rows) {
    ojson row;
    row["left"] = r.left;
    row["right"] = r.right;
    row["weight"] = r.weight;
    row["estimate"] = r.estimate;
    row["ci99_half_width"] = r.ci_half_width;
    row["target"] = r.target;
    row["pass"] = r.pass;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string verify_report_csv(const VerifyReport& report) {
  std::ostringstream os;
  os << "check,pass,margin,details\n";
  for (const CheckRow& c : report.checks) {
    std::string details = c.details;
    std::replace(details.begin(), details.end(), ',', ';');
    os << c.name << ',' << (c.pass ? 1 : 0) << ',' << fmt_double(c.margin) << ',' << details
       << '\n';
  }
  return os.str();
}

std::string verify_report_json(const VerifyReport& report) {
  ojson j;
  j["pass"] = report.pass;
  j["checks"] = ojson::array();
  for (const CheckRow& c : report.checks) {
    ojson row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["margin"] = c.margin;
    row["details"] = c.details;
    j["checks"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

}  // namespace oblivmatch
