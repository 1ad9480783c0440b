#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>

#include "oblivmatch/generators.hpp"
#include "oblivmatch/io.hpp"
#include "oblivmatch/rng.hpp"
#include "oblivmatch/types.hpp"

using namespace oblivmatch;

namespace {

BipartiteInstance make_instance(std::initializer_list<std::initializer_list<double>> rows) {
  BipartiteInstance instance;
  const Eigen::Index nl = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index nr = static_cast<Eigen::Index>(rows.begin()->size());
  instance.weights.resize(nl, nr);
  Eigen::Index u = 0;
  for (const auto& row : rows) {
    Eigen::Index v = 0;
    for (double w : row) instance.weights(u, v++) = w;
    ++u;
  }
  return instance;
}

BitMatrix all_bits(Eigen::Index nl, Eigen::Index nr, bool value) {
  return BitMatrix::Constant(nl, nr, value);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("instance validation accepts a plain weight matrix") {
  const BipartiteInstance instance = make_instance({{1.0, 0.0}, {2.5, 3.0}});
  CHECK(validate_instance(instance).ok());
  CHECK(instance.n_left() == 2);
  CHECK(instance.n_right() == 2);
}

TEST_CASE("instance validation flags negative and non-finite weights") {
  BipartiteInstance instance = make_instance({{1.0, -2.0}});
  auto report = validate_instance(instance);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0] == "negative weight at (0,1)");

  instance.weights(0, 0) = std::numeric_limits<double>::quiet_NaN();
  report = validate_instance(instance);
  REQUIRE(report.violations.size() == 2);
  CHECK(report.violations[0] == "non-finite weight at (0,0)");
}

TEST_CASE("instance validation flags empty dimensions") {
  BipartiteInstance instance;
  instance.weights.resize(0, 0);
  const auto report = validate_instance(instance);
  CHECK_FALSE(report.ok());
  CHECK(report.violations.size() == 2);
}

TEST_CASE("realization validation checks shape and parameters") {
  const BipartiteInstance instance = make_instance({{1.0, 1.0}});

  CHECK(validate_realization(instance, AdversarialBits{all_bits(1, 2, true)}).ok());

  const auto mismatch = validate_realization(instance, AdversarialBits{all_bits(2, 2, true)});
  REQUIRE_FALSE(mismatch.ok());
  CHECK(mismatch.violations[0].find("dimension mismatch") != std::string::npos);

  ProbMatrix probs(1, 2);
  probs << 0.5, 1.5;
  const auto bad_p = validate_realization(instance, BernoulliProbs{probs});
  REQUIRE_FALSE(bad_p.ok());
  CHECK(bad_p.violations[0] == "probability out of range at (0,1)");

  JointSampler empty;
  empty.n_left = 1;
  empty.n_right = 2;
  CHECK_FALSE(validate_realization(instance, Realization{empty}).ok());
}

TEST_CASE("adversarial bits pass through realize_bits untouched") {
  BitMatrix bits(2, 2);
  bits << true, false, false, true;
  const Realization realization = AdversarialBits{bits};
  const BitMatrix out_a = realize_bits(realization, 1);
  const BitMatrix out_b = realize_bits(realization, 999);
  CHECK((out_a == bits).all());
  CHECK((out_b == bits).all());
}

TEST_CASE("bernoulli bits are deterministic in the seed and honor p=0 and p=1") {
  ProbMatrix probs = ProbMatrix::Constant(4, 3, 0.5);
  const Realization realization = BernoulliProbs{probs};
  const BitMatrix a = realize_bits(realization, 42);
  const BitMatrix b = realize_bits(realization, 42);
  CHECK((a == b).all());

  const Realization zero = BernoulliProbs{ProbMatrix::Constant(4, 3, 0.0)};
  CHECK_FALSE(realize_bits(zero, 7).any());
  const Realization one = BernoulliProbs{ProbMatrix::Constant(4, 3, 1.0)};
  CHECK(realize_bits(one, 7).all());
}

TEST_CASE("bernoulli frequency tracks the probability") {
  const Realization realization = BernoulliProbs{ProbMatrix::Constant(10, 10, 0.3)};
  long ones = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const BitMatrix bits = realize_bits(realization, 1000 + static_cast<std::uint64_t>(t));
    ones += bits.count();
  }
  const double freq = static_cast<double>(ones) / (100.0 * trials);
  CHECK(freq == doctest::Approx(0.3).epsilon(0.1));
}

TEST_CASE("correlated coin sampler emits all-or-nothing bits with the right frequency") {
  const JointSampler sampler = correlated_coin_sampler(5, 7, 0.6);
  const Realization realization{sampler};
  int all_on = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const BitMatrix bits = realize_bits(realization, static_cast<std::uint64_t>(t));
    const long count = bits.count();
    const bool on = count == 35;
    CHECK((count == 0 || count == 35));
    if (on) ++all_on;
  }
  const double freq = static_cast<double>(all_on) / trials;
  CHECK(freq == doctest::Approx(0.6).epsilon(0.15));
  CHECK_THROWS_AS(correlated_coin_sampler(2, 2, 1.2), std::invalid_argument);
}

TEST_CASE("joint sampler with a wrong-shape draw is rejected") {
  JointSampler sampler;
  sampler.n_left = 2;
  sampler.n_right = 2;
  sampler.draw = [](std::uint64_t) { return BitMatrix::Constant(3, 3, true); };
  CHECK_THROWS_AS(realize_bits(Realization{sampler}, 0), std::logic_error);
}

TEST_CASE("matching weight and validity checks") {
  const BipartiteInstance instance = make_instance({{2.0, 1.0}, {1.0, 2.0}});
  const BitMatrix bits = all_bits(2, 2, true);

  Matching m;
  m.pairs = {{0, 0}, {1, 1}};
  m.total_weight = 4.0;
  CHECK(matching_weight(instance, m.pairs) == 4.0);
  CHECK(is_valid_matching(instance, bits, m));

  Matching wrong_total = m;
  wrong_total.total_weight = 3.0;
  CHECK_FALSE(is_valid_matching(instance, bits, wrong_total));

  Matching shared_vertex;
  shared_vertex.pairs = {{0, 0}, {0, 1}};
  shared_vertex.total_weight = 3.0;
  CHECK_FALSE(is_valid_matching(instance, bits, shared_vertex));

  BitMatrix sparse(2, 2);
  sparse << true, false, false, false;
  Matching absent_edge;
  absent_edge.pairs = {{1, 1}};
  absent_edge.total_weight = 2.0;
  CHECK_FALSE(is_valid_matching(instance, sparse, absent_edge));

  Matching empty;
  CHECK(is_valid_matching(instance, sparse, empty));
}

TEST_CASE("random generator is deterministic and respects the edge probability") {
  const Problem a = generate_random(5, 6, UniformWeights{0.0, 1.0}, 0.5, 99);
  const Problem b = generate_random(5, 6, UniformWeights{0.0, 1.0}, 0.5, 99);
  CHECK(a.instance.weights == b.instance.weights);
  const auto& bits_a = std::get<AdversarialBits>(a.realization).present;
  const auto& bits_b = std::get<AdversarialBits>(b.realization).present;
  CHECK((bits_a == bits_b).all());
  CHECK(validate_instance(a.instance).ok());
  CHECK(validate_realization(a.instance, a.realization).ok());

  const Problem full = generate_random(5, 5, UniformWeights{0.0, 1.0}, 1.0, 3);
  CHECK(std::get<AdversarialBits>(full.realization).present.count() == 25);
  const Problem none = generate_random(5, 5, UniformWeights{0.0, 1.0}, 0.0, 3);
  CHECK(std::get<AdversarialBits>(none.realization).present.count() == 0);
}

TEST_CASE("random generator rejects bad parameters") {
  CHECK_THROWS_WITH_AS(generate_random(2, 2, UniformWeights{}, 1.5, 0),
                       "probability out of range", std::invalid_argument);
  CHECK_THROWS_WITH_AS(generate_random(0, 2, UniformWeights{}, 0.5, 0),
                       "vertex counts must be >= 1", std::invalid_argument);
  CHECK_THROWS_AS(generate_random(2, 2, UniformWeights{2.0, 1.0}, 0.5, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_random(2, 2, ConstantWeights{-1.0}, 0.5, 0), std::invalid_argument);
}

TEST_CASE("constant weight distribution fills the matrix") {
  const Problem p = generate_random(3, 3, ConstantWeights{2.5}, 1.0, 1);
  CHECK((p.instance.weights.array() == 2.5).all());
}

TEST_CASE("upper triangular family has ones above the diagonal") {
  const Problem p = generate_upper_triangular(4);
  CHECK(p.instance.n_left() == 4);
  CHECK((p.instance.weights.array() == 1.0).all());
  const auto& bits = std::get<AdversarialBits>(p.realization).present;
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(bits(i, j) == (i <= j));
  CHECK_THROWS_AS(generate_upper_triangular(0), std::invalid_argument);
}

TEST_CASE("fmt_double round-trips exactly") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(2.0) == "2");
  CHECK(fmt_double(0.0) == "0");
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const double x = (rng.uniform01() - 0.5) * 1e6;
    CHECK(std::strtod(fmt_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("instance json round-trips through serialization") {
  Problem problem = generate_random(3, 4, UniformWeights{0.0, 2.0}, 0.5, 17);
  const std::string text = instance_to_json(problem);
  const Problem back = parse_instance_json(text);
  CHECK(back.instance.weights == problem.instance.weights);
  const auto& bits = std::get<AdversarialBits>(problem.realization).present;
  const auto& bits_back = std::get<AdversarialBits>(back.realization).present;
  CHECK((bits == bits_back).all());

  ProbMatrix probs = ProbMatrix::Constant(3, 4, 0.25);
  problem.realization = BernoulliProbs{probs};
  const Problem bern = parse_instance_json(instance_to_json(problem));
  CHECK(std::get<BernoulliProbs>(bern.realization).probs == probs);
}

TEST_CASE("instance json write and read through the filesystem") {
  const std::string path = temp_path("oblivmatch_io_roundtrip.json");
  const Problem problem = generate_random(2, 2, UniformWeights{}, 1.0, 5);
  write_instance(path, problem);
  const Problem back = read_instance(path);
  CHECK(back.instance.weights == problem.instance.weights);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_instance(path), IoError);
}

TEST_CASE("instance parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_instance_json("this is not json"), IoError);
  CHECK_THROWS_AS(parse_instance_json("{}"), IoError);
  CHECK_THROWS_AS(parse_instance_json(R"({"n_left":1,"n_right":1,"weights":[[1,2]],)"
                                      R"("realization":{"type":"adversarial","edges":[[1]]}})"),
                  IoError);
  CHECK_THROWS_AS(parse_instance_json(R"({"n_left":1,"n_right":1,"weights":[[1]],)"
                                      R"("realization":{"type":"bernoulli","probs":[[1.5]]}})"),
                  IoError);
  CHECK_THROWS_AS(parse_instance_json(R"({"n_left":1,"n_right":1,"weights":[[1]],)"
                                      R"("realization":{"type":"adversarial","edges":[[2]]}})"),
                  IoError);
  CHECK_THROWS_AS(parse_instance_json(R"({"n_left":1,"n_right":1,"weights":[[1]],)"
                                      R"("realization":{"type":"mystery"}})"),
                  IoError);
  CHECK_THROWS_AS(parse_instance_json(R"({"n_left":0,"n_right":1,"weights":[],)"
                                      R"("realization":{"type":"adversarial","edges":[]}})"),
                  IoError);
}

TEST_CASE("joint sampler realizations are not serializable") {
  Problem problem;
  problem.instance = make_instance({{1.0}});
  problem.realization = correlated_coin_sampler(1, 1, 0.5);
  CHECK_THROWS_AS(instance_to_json(problem), IoError);
}

TEST_CASE("seed mixing separates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}
