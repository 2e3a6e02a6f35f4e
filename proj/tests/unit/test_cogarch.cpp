#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "supcogarch/cogarch.hpp"
#include "supcogarch/errors.hpp"
#include "supcogarch/rng.hpp"

namespace sc = supcogarch;

namespace {

const sc::LevyModel kCpp = sc::LevyModel::compound_poisson(1.0);
const oracle::Driver kCppDriver{1.0, 3.0};

sc::PathRecord simulate(const sc::CogarchParams& p, double horizon, std::uint64_t seed, double v0) {
  const auto l = sc::simulate_levy_path(kCpp, {0.0, horizon}, seed);
  return sc::simulate_cogarch(p, sc::squared_jumps(l), v0);
}

}  // namespace

TEST(Cogarch, ZeroPhiIsConstantAtLevel) {
  const sc::CogarchParams p{2.0, 0.5, 0.0};
  const auto path = simulate(p, 50.0, 3, 4.0);
  for (double t : {0.0, 1.3, 10.0, 49.9}) EXPECT_DOUBLE_EQ(path.value_at(t), 4.0);
  EXPECT_DOUBLE_EQ(sc::stationary_mean(p, kCpp), 4.0);
  sc::StationarySampler sampler(p, kCpp);
  EXPECT_EQ(sampler.draw(1), 4.0);
  EXPECT_EQ(sampler.draw(99), 4.0);
}

TEST(Cogarch, RelaxationBetweenEvents) {
  const sc::CogarchParams p{1.0, 1.0, 0.5};
  const auto path = sc::simulate_cogarch(p, sc::JumpPath({0.0, 5.0}, {}), 2.0);
  EXPECT_NEAR(path.value_at(std::log(2.0)), 1.5, 1e-15);
}

TEST(Cogarch, MultiplicativeJump) {
  const sc::CogarchParams p{1.0, 1.0, 0.5};
  const auto path = sc::simulate_cogarch(p, sc::JumpPath({0.0, 2.0}, {{1.0, 4.0}}), 2.0);
  const double w = path.left_limit_at(1.0);
  EXPECT_NEAR(w, 1.0 + std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(path.value_at(1.0), 3.0 * w);
  ASSERT_EQ(path.events().size(), 1u);
  EXPECT_DOUBLE_EQ(path.events()[0].jump, 2.0 * w);
}

TEST(Cogarch, PathwiseInvariants) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> beta(0.1, 3.0), eta(0.2, 2.0), frac(0.0, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    const double e = eta(g);
    const sc::CogarchParams p{beta(g), e, frac(g) * e};
    const auto path = simulate(p, 30.0, trial, p.beta / p.eta);
    const auto events = path.events();
    double prev_time = 0.0, prev_value = path.v0();
    for (const auto& ev : events) {
      EXPECT_GE(ev.post_jump, ev.left_limit);
      EXPECT_GT(ev.left_limit, 0.0);
      const double mid = 0.5 * (prev_time + ev.time);
      const double level = p.beta / p.eta;
      EXPECT_NEAR(path.value_at(mid), level + (prev_value - level) * std::exp(-p.eta * (mid - prev_time)),
                  1e-12 * std::max(1.0, prev_value));
      prev_time = ev.time;
      prev_value = ev.post_jump;
    }
  }
}

TEST(Cogarch, JumpIdentityIsExact) {
  const sc::CogarchParams p{1.0, 1.0, 0.5};
  const auto l = sc::simulate_levy_path(kCpp, {0.0, 200.0}, 17);
  const auto s = sc::squared_jumps(l);
  const auto path = sc::simulate_cogarch(p, s, 2.0);
  ASSERT_EQ(path.events().size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = path.events()[i];
    EXPECT_EQ(e.jump, p.phi * e.left_limit * s.marks()[i].size);
    EXPECT_EQ(e.post_jump, e.left_limit + e.jump);
  }
}

TEST(Cogarch, RejectsBadInputs) {
  EXPECT_THROW(sc::simulate_cogarch({1.0, 1.0, 0.5}, sc::JumpPath({0.0, 1.0}, {}), 0.0), std::invalid_argument);
  EXPECT_THROW(sc::simulate_cogarch({1.0, 1.0, 0.5}, sc::JumpPath({0.0, 1.0}, {{0.5, -1.0}}), 1.0),
               std::invalid_argument);
  EXPECT_THROW(sc::validate(sc::CogarchParams{0.0, 1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(sc::validate(sc::CogarchParams{1.0, -1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(sc::validate(sc::CogarchParams{1.0, 1.0, -0.5}), std::invalid_argument);
}

TEST(Cogarch, RestrictedFromKeepsValues) {
  const auto path = simulate({1.0, 1.0, 0.5}, 20.0, 4, 2.0);
  const auto tail = path.restricted_from(7.5);
  EXPECT_EQ(tail.horizon().start, 7.5);
  EXPECT_DOUBLE_EQ(tail.v0(), path.value_at(7.5));
  for (double t : {8.0, 12.25, 19.0}) EXPECT_NEAR(tail.value_at(t), path.value_at(t), 1e-12);
}

TEST(Cogarch, CsvTwoRowsPerEvent) {
  const auto path = sc::simulate_cogarch({1.0, 1.0, 0.5}, sc::JumpPath({0.0, 2.0}, {{1.0, 4.0}}), 1.0);
  std::ostringstream out;
  sc::write_csv(out, path);
  EXPECT_EQ(out.str(), "time,value,is_jump\n0,1,0\n1,1,1\n1,3,1\n");
  std::ostringstream grid;
  sc::write_csv(grid, path, 1.0);
  EXPECT_EQ(grid.str(), "time,value,is_jump\n0,1,0\n1,1,1\n1,3,1\n2,1.7357588823428847,0\n");
}

TEST(CogarchMoments, ReferenceValues) {
  const sc::CogarchParams p{1.0, 1.0, 0.5};
  EXPECT_DOUBLE_EQ(sc::stationary_mean(p, kCpp), 2.0);
  EXPECT_DOUBLE_EQ(sc::stationary_second_moment(p, kCpp), 16.0);
  EXPECT_DOUBLE_EQ(sc::stationary_variance(p, kCpp), 12.0);
  EXPECT_DOUBLE_EQ(sc::stationary_variance_alt(p, kCpp), 12.0);
  EXPECT_DOUBLE_EQ(sc::stationary_acov(p, kCpp, 0.0), 12.0);
  for (double h : {0.5, 1.0, 2.0}) EXPECT_NEAR(sc::stationary_acov(p, kCpp, h), 12.0 * std::exp(-0.5 * h), 1e-13);
}

TEST(CogarchMoments, FirstButNotSecondMoment) {
  const sc::CogarchParams p{1.0, 1.0, 0.95};
  EXPECT_NEAR(sc::stationary_mean(p, kCpp), 20.0, 1e-12);
  EXPECT_THROW(sc::stationary_second_moment(p, kCpp), sc::MomentDiverges);
  EXPECT_THROW(sc::stationary_variance(p, kCpp), sc::MomentDiverges);
  EXPECT_THROW(sc::stationary_acov(p, kCpp, 1.0), sc::MomentDiverges);
  EXPECT_THROW(sc::stationary_mean({1.0, 1.0, 1.2}, kCpp), sc::MomentDiverges);
}

TEST(CogarchMoments, VarianceFormsAgreeAndMatchGenerator) {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> beta(0.1, 5.0), eta(0.1, 3.0), frac(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double e = eta(g);
    // For CPP(1, N(0,1)), Ψ(2, φ) = 2φ + 3φ² - 2η; stay strictly inside.
    const double phi_cap = (-1.0 + std::sqrt(1.0 + 6.0 * e)) / 3.0;
    const sc::CogarchParams p{beta(g), e, frac(g) * phi_cap};
    const double v1 = sc::stationary_variance(p, kCpp);
    const double v2 = sc::stationary_variance_alt(p, kCpp);
    const double m = oracle::mean(p.beta, e, p.phi, kCppDriver);
    // E[V²] - E[V]² cancels; the rounding floor scales with E[V]².
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * m * m;
    EXPECT_LT(std::abs(v1 - v2), 1e-12 * std::abs(v2) + floor) << "beta=" << p.beta << " eta=" << e << " phi=" << p.phi;
    EXPECT_NEAR(sc::stationary_second_moment(p, kCpp), oracle::joint_moment(p.beta, e, p.phi, p.phi, kCppDriver),
                1e-10 * m * m);
  }
}

TEST(CrossMoments, ReferenceValues) {
  const sc::CogarchParams p{1.0, 1.0, 0.5};
  EXPECT_NEAR(sc::cross_moment(p, 0.2, kCpp), 3.25, 1e-13);
  EXPECT_NEAR(sc::cross_cov(p, 0.2, kCpp), 0.75, 1e-13);
  EXPECT_NEAR(sc::cross_moment(p, 0.2, kCpp), oracle::joint_moment(1.0, 1.0, 0.5, 0.2, kCppDriver), 1e-13);
  EXPECT_NEAR(sc::cross_moment(p, 0.5, kCpp), sc::stationary_second_moment(p, kCpp), 1e-12);
  for (double h : {0.5, 1.0, 2.0})
    EXPECT_NEAR(sc::cross_acov(p, 0.2, kCpp, h) / sc::cross_acov(p, 0.2, kCpp, 0.0), std::exp(-0.8 * h), 1e-13);
}

TEST(CrossMoments, NonnegativeOnRandomPairs) {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> phi(0.0, 0.54);
  for (int i = 0; i < 100; ++i) {
    const double a = phi(g), b = phi(g);
    EXPECT_GE(sc::cross_cov({1.0, 1.0, a}, b, kCpp), 0.0);
    EXPECT_NEAR(sc::cross_moment({1.0, 1.0, a}, b, kCpp), oracle::joint_moment(1.0, 1.0, a, b, kCppDriver), 1e-10);
  }
}

TEST(CogarchBurnIn, Defaults) {
  EXPECT_DOUBLE_EQ(sc::default_burn_in({1.0, 1.0, 0.5}, kCpp), 80.0);
  EXPECT_DOUBLE_EQ(sc::default_burn_in({1.0, 2.0, 0.0}, kCpp), 20.0);
}

TEST(StationarySampler, RejectsNonStationary) {
  EXPECT_THROW(sc::StationarySampler({1.0, 1.0, 3.5}, kCpp), sc::NonStationary);
  EXPECT_THROW(sc::draw_stationary_v0({1.0, 1.0, 3.5}, kCpp, 1), sc::NonStationary);
}

TEST(StationarySampler, DeterministicPerSeed) {
  const sc::StationarySampler s({1.0, 1.0, 0.5}, kCpp);
  EXPECT_EQ(s.draw(5), s.draw(5));
  EXPECT_NE(s.draw(5), s.draw(6));
  EXPECT_EQ(s.start_value(), 2.0);
}

// Light tails (κ = 5.16) so that the variance and autocovariance estimators
// have finite variance.
TEST(StationarySampler, MomentsMatchClosedForms) {
  const sc::CogarchParams p{1.0, 1.0, 0.2};
  const sc::StationarySampler sampler(p, kCpp);
  const std::size_t n = 20'000;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = sampler.draw(sc::derive_seed(77, {i}));
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0, s4 = 0.0;
  for (double v : x) {
    ss += (v - m) * (v - m);
    s4 += std::pow(v - m, 4);
  }
  const double var = ss / (n - 1);
  EXPECT_LT(std::abs(m - 1.25), 4.0 * std::sqrt(var / n));
  const double var_se = std::sqrt((s4 / n - var * var) / n);
  EXPECT_LT(std::abs(var - sc::stationary_variance(p, kCpp)), 5.0 * var_se);
}
