#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oblivmatch/probe_env.hpp"

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

}  // namespace

TEST_CASE("probe outcomes and matched flags") {
  const BipartiteInstance instance = make_instance({{2.0, 1.0}, {1.0, 2.0}});
  BitMatrix bits(2, 2);
  bits << true, false, false, true;
  ProbeEnv env(instance, bits);

  CHECK_FALSE(env.left_matched(0));
  CHECK(env.probe(0, 1) == ProbeOutcome::EdgeAbsent);
  CHECK_FALSE(env.left_matched(0));
  CHECK_FALSE(env.right_matched(1));

  CHECK(env.probe(0, 0) == ProbeOutcome::Matched);
  CHECK(env.left_matched(0));
  CHECK(env.right_matched(0));
  CHECK(env.matched_pairs() == 1);

  CHECK(env.probe(1, 1) == ProbeOutcome::Matched);
  CHECK(env.matched_pairs() == 2);

  const Matching m = env.final_matching();
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(m.pairs[1] == std::pair<int, int>{1, 1});
  CHECK(m.total_weight == 4.0);
}

TEST_CASE("final matching is sorted by left index") {
  const BipartiteInstance instance = make_instance({{1.0, 1.0}, {1.0, 1.0}});
  ProbeEnv env(instance, BitMatrix::Constant(2, 2, true));
  env.probe(1, 0);
  env.probe(0, 1);
  const Matching m = env.final_matching();
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0] == std::pair<int, int>{0, 1});
  CHECK(m.pairs[1] == std::pair<int, int>{1, 0});
}

TEST_CASE("duplicate probe of an absent pair is rejected") {
  const BipartiteInstance instance = make_instance({{1.0}});
  ProbeEnv env(instance, BitMatrix::Constant(1, 1, false));
  CHECK(env.probe(0, 0) == ProbeOutcome::EdgeAbsent);
  CHECK_THROWS_WITH_AS(env.probe(0, 0), "duplicate probe of (0,0)", DuplicateProbe);
}

TEST_CASE("probing a matched vertex is rejected") {
  const BipartiteInstance instance = make_instance({{1.0, 1.0}});
  ProbeEnv env(instance, BitMatrix::Constant(1, 2, true));
  CHECK(env.probe(0, 0) == ProbeOutcome::Matched);
  CHECK_THROWS_WITH_AS(env.probe(0, 1), "probe of matched vertex at (0,1)",
                       ProbeOfMatchedVertex);
  // Both contract errors share the ProbeError base.
  CHECK_THROWS_AS(env.probe(0, 1), ProbeError);
}

TEST_CASE("probe indices are bounds-checked") {
  const BipartiteInstance instance = make_instance({{1.0}});
  ProbeEnv env(instance, BitMatrix::Constant(1, 1, true));
  CHECK_THROWS_WITH_AS(env.probe(-1, 0), "probe index out of range", std::invalid_argument);
  CHECK_THROWS_WITH_AS(env.probe(0, 1), "probe index out of range", std::invalid_argument);
  CHECK_THROWS_WITH_AS(env.probe(1, 0), "probe index out of range", std::invalid_argument);
}

TEST_CASE("log records steps in probe order") {
  const BipartiteInstance instance = make_instance({{1.0, 1.0, 1.0}});
  BitMatrix bits(1, 3);
  bits << false, false, true;
  ProbeEnv env(instance, bits);
  env.probe(0, 1);
  env.probe(0, 0);
  env.probe(0, 2);
  const auto& log = env.log();
  REQUIRE(log.size() == 3);
  CHECK(log[0].step == 0);
  CHECK(log[0].left == 0);
  CHECK(log[0].right == 1);
  CHECK(log[0].outcome == ProbeOutcome::EdgeAbsent);
  CHECK(log[1].step == 1);
  CHECK(log[1].right == 0);
  CHECK(log[2].step == 2);
  CHECK(log[2].outcome == ProbeOutcome::Matched);
}

TEST_CASE("bits shape must match the instance") {
  const BipartiteInstance instance = make_instance({{1.0}});
  CHECK_THROWS_WITH_AS(ProbeEnv(instance, BitMatrix::Constant(2, 1, false)),
                       "dimension mismatch: bits are 2x1, instance is 1x1",
                       std::invalid_argument);
}

TEST_CASE("realization constructor samples deterministically") {
  const BipartiteInstance instance = make_instance({{1.0, 1.0}, {1.0, 1.0}});

  SUBCASE("certain edges always match") {
    const Realization sure = BernoulliProbs{ProbMatrix::Constant(2, 2, 1.0)};
    ProbeEnv env(instance, sure, 42);
    CHECK(env.probe(0, 0) == ProbeOutcome::Matched);
    CHECK(env.probe(1, 1) == ProbeOutcome::Matched);
  }

  SUBCASE("same seed reproduces every outcome") {
    const Realization coin = BernoulliProbs{ProbMatrix::Constant(2, 2, 0.5)};
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
      ProbeEnv a(instance, coin, seed);
      ProbeEnv b(instance, coin, seed);
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
          if (a.left_matched(u) || a.right_matched(v)) continue;
          CHECK(a.probe(u, v) == b.probe(u, v));
        }
    }
  }

  SUBCASE("adversarial bits pass through unchanged") {
    BitMatrix bits(2, 2);
    bits << false, true, true, false;
    ProbeEnv env(instance, Realization{AdversarialBits{bits}}, 7);
    CHECK(env.probe(0, 0) == ProbeOutcome::EdgeAbsent);
    CHECK(env.probe(0, 1) == ProbeOutcome::Matched);
    CHECK(env.probe(1, 0) == ProbeOutcome::Matched);
  }
}

TEST_CASE("probe log csv rows") {
  const BipartiteInstance instance = make_instance({{1.0, 1.0}});
  BitMatrix bits(1, 2);
  bits << true, false;
  ProbeEnv env(instance, bits);
  env.probe(0, 0);
  // Right vertex 1 is still free but left 0 is matched, so the trial ends.
  std::ostringstream os;
  probe_log_csv(os, 7, env.log());
  CHECK(os.str() == "7,0,0,0,matched\n");

  ProbeEnv miss(instance, BitMatrix::Constant(1, 2, false));
  miss.probe(0, 0);
  miss.probe(0, 1);
  std::ostringstream os2;
  probe_log_csv(os2, 7, miss.log());
  CHECK(os2.str() == "7,0,0,0,absent\n7,1,0,1,absent\n");
}
