#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oblivmatch/analysis.hpp"
#include "oblivmatch/generators.hpp"
#include "oblivmatch/io.hpp"
#include "oblivmatch/oracle.hpp"

using namespace oblivmatch;

namespace {

// Everything deterministic goes to stdout; timing goes to stderr so repeated
// runs with one seed produce byte-identical captures.
class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  ~WallTimer() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    const double s = std::chrono::duration<double>(elapsed).count();
    std::fprintf(stderr, "wall_time_s=%.3f\n", s);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

struct Options {
  std::string family;
  std::string instance;
  std::string out;
  std::string format = "csv";
  std::string algo = "ranking";
  long n = 0;
  long nl = 0;
  long nr = 0;
  double p = 0.5;
  double slack = 0.01;
  long trials = 10000;
  int grid = 101;
  std::uint64_t seed = 1;
};

int cmd_gen(const Options& opt) {
  Problem problem;
  if (opt.family == "upper-triangular") {
    const long n = opt.n > 0 ? opt.n : opt.nl;
    if (n < 1) throw std::invalid_argument("vertex counts must be >= 1");
    problem = generate_upper_triangular(n);
  } else {
    const long nl = opt.nl > 0 ? opt.nl : opt.n;
    const long nr = opt.nr > 0 ? opt.nr : opt.n;
    problem = generate_random(nl, nr, UniformWeights{0.0, 1.0}, opt.p, opt.seed);
  }
  write_instance(opt.out, problem);

  const auto& bits = std::get<AdversarialBits>(problem.realization).present;
  const OptimalResult opt_res = max_weight_matching(problem.instance, bits);
  long present = 0;
  for (Eigen::Index u = 0; u < bits.rows(); ++u)
    for (Eigen::Index v = 0; v < bits.cols(); ++v)
      if (bits(u, v)) ++present;

  std::cout << "wrote " << opt.out << '\n'
            << "n_left=" << problem.instance.n_left() << '\n'
            << "n_right=" << problem.instance.n_right() << '\n'
            << "present_edges=" << present << '\n'
            << "max_weight=" << fmt_double(opt_res.value) << '\n';
  return 0;
}

int cmd_run(const Options& opt) {
  const WallTimer timer;
  const Problem problem = read_instance(opt.instance);
  const Algorithm algo = parse_algorithm(opt.algo);
  const std::vector<TrialRow> rows = run_trials(problem, opt.trials, opt.seed, algo);
  const RatioEstimate summary = summarize_ratio(rows);

  std::string report;
  if (opt.format == "json") {
    report = trial_rows_json(rows, summary);
  } else {
    std::ostringstream os;
    trial_rows_csv(os, rows);
    os << "# summary alg_mean=" << fmt_double(summary.alg_mean)
       << " opt_mean=" << fmt_double(summary.opt_mean) << " ratio=" << fmt_double(summary.ratio)
       << " ci99_half_width=" << fmt_double(summary.ci_half_width)
       << " n_trials=" << summary.n_trials << '\n';
    report = os.str();
  }

  if (opt.out.empty()) {
    std::cout << report;
  } else {
    write_text_file(opt.out, report);
    std::cout << "wrote " << opt.out << '\n'
              << "alg_mean=" << fmt_double(summary.alg_mean) << '\n'
              << "opt_mean=" << fmt_double(summary.opt_mean) << '\n'
              << "ratio=" << fmt_double(summary.ratio) << '\n'
              << "ci99_half_width=" << fmt_double(summary.ci_half_width) << '\n'
              << "n_trials=" << summary.n_trials << '\n';
  }
  return 0;
}

int cmd_ratio(const Options& opt) {
  const WallTimer timer;
  const Problem problem = read_instance(opt.instance);
  const Algorithm algo = parse_algorithm(opt.algo);
  const RatioEstimate est = estimate_ratio(problem, opt.trials, opt.seed, algo);
  const bool pass = est.ratio - est.ci_half_width >= kRatioTarget - opt.slack;

  if (!opt.out.empty()) {
    write_text_file(opt.out, opt.format == "json" ? ratio_json(est) : ratio_csv(est));
    std::cout << "wrote " << opt.out << '\n';
  }
  std::cout << "alg_mean=" << fmt_double(est.alg_mean) << '\n'
            << "opt_mean=" << fmt_double(est.opt_mean) << '\n'
            << "ratio=" << fmt_double(est.ratio) << '\n'
            << "ci99_half_width=" << fmt_double(est.ci_half_width) << '\n'
            << "n_trials=" << est.n_trials << '\n'
            << "target=" << fmt_double(kRatioTarget) << '\n'
            << "slack=" << fmt_double(opt.slack) << '\n'
            << "pass=" << (pass ? 1 : 0) << '\n';
  return pass ? 0 : 1;
}

int cmd_verify(const Options& opt) {
  const WallTimer timer;
  const Problem problem = read_instance(opt.instance);
  VerifyConfig config;
  config.n_trials = opt.trials;
  config.n_rank_samples =
      static_cast<int>(std::min<long>(std::max<long>(opt.trials, 100), 10000));
  config.grid = opt.grid;
  config.seed = opt.seed;
  const VerifyReport report = run_verification(problem, config);

  if (!opt.out.empty()) {
    write_text_file(opt.out,
                    opt.format == "json" ? verify_report_json(report) : verify_report_csv(report));
    std::cout << "wrote " << opt.out << '\n';
  }
  for (const CheckRow& check : report.checks)
    std::cout << check.name << ": " << (check.pass ? "PASS" : "FAIL") << " (" << check.details
              << ")\n";
  std::cout << "verify: " << (report.pass ? "PASS" : "FAIL") << '\n';
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Oblivious bipartite matching: simulate weighted ranking under query-commit "
               "probing and verify its (1-1/e) guarantee empirically"};
  app.require_subcommand(1);

  CLI::App* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--family", opt.family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"random", "upper-triangular"}));
  gen->add_option("--n", opt.n, "Square size (or upper-triangular size)");
  gen->add_option("--nl", opt.nl, "Left vertex count");
  gen->add_option("--nr", opt.nr, "Right vertex count");
  gen->add_option("--p", opt.p, "Edge presence probability (random family)");
  gen->add_option("--seed", opt.seed, "Generator seed");
  gen->add_option("--out", opt.out, "Output instance path")->required();

  const auto add_common = [&](CLI::App* sub, bool with_algo) {
    sub->add_option("--instance", opt.instance, "Instance file")->required();
    sub->add_option("--trials", opt.trials, "Trial count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("--out", opt.out, "Report output path");
    sub->add_option("--format", opt.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_algo)
      sub->add_option("--algo", opt.algo, "Algorithm")
          ->check(CLI::IsMember({"ranking", "greedy"}));
  };

  CLI::App* run = app.add_subcommand("run", "Per-trial algorithm log");
  add_common(run, true);

  CLI::App* ratio = app.add_subcommand("ratio", "Monte Carlo approximation-ratio estimate");
  add_common(ratio, true);
  ratio->add_option("--slack", opt.slack, "Allowed shortfall below the 1-1/e target")
      ->check(CLI::NonNegativeNumber);

  CLI::App* verify = app.add_subcommand("verify", "Run the full property-check suite");
  add_common(verify, false);
  verify->add_option("--grid", opt.grid, "Grid size for sweeps")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(gen)) return cmd_gen(opt);
    if (app.got_subcommand(run)) return cmd_run(opt);
    if (app.got_subcommand(ratio)) return cmd_ratio(opt);
    return cmd_verify(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
