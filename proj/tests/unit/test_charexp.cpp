#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "supcogarch/charexp.hpp"
#include "supcogarch/errors.hpp"

namespace sc = supcogarch;

namespace {

sc::ExponentContext cpp_ctx(double eta = 1.0) { return {sc::LevyModel::compound_poisson(1.0), eta}; }

}  // namespace

TEST(Psi, ClosedFormsAtOneAndTwo) {
  const auto ctx = cpp_ctx();
  EXPECT_DOUBLE_EQ(sc::psi(ctx, 1.0, 0.5), -0.5);
  EXPECT_DOUBLE_EQ(sc::psi(ctx, 2.0, 0.5), -0.25);
  EXPECT_NEAR(sc::psi(ctx, 2.0, 0.95), 2.6075, 1e-12);
}

TEST(Psi, IntegerOrderMatchesGaussianMoments) {
  // E[(1 + 0.5Y²)³] = 1 + 1.5 + 0.75·3 + 0.125·15 = 6.625.
  EXPECT_NEAR(sc::psi(cpp_ctx(), 3.0, 0.5), 6.625 - 1.0 - 3.0, 1e-10);
}

TEST(Psi, ZeroPhiIsLinear) {
  for (double eta : {0.1, 1.0, 3.0}) {
    const auto ctx = cpp_ctx(eta);
    for (double u : {0.0, 0.3, 1.0, 2.5, 7.0}) EXPECT_EQ(sc::psi(ctx, u, 0.0), -eta * u);
  }
  const sc::ExponentContext vg(sc::LevyModel::variance_gamma(1.0, 1.0), 0.05);
  EXPECT_EQ(sc::psi(vg, 1.7, 0.0), -0.05 * 1.7);
}

TEST(Psi, QuadratureMatchesSimpsonOracle) {
  const auto ctx = cpp_ctx();
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> uu(0.1, 4.0), ff(0.01, 1.5);
  for (int i = 0; i < 12; ++i) {
    const double u = uu(g), phi = ff(g);
    const double expect = oracle::psi_cpp(u, phi, 1.0);
    EXPECT_NEAR(sc::psi(ctx, u, phi), expect, 1e-8 * std::max(1.0, std::abs(expect))) << "u=" << u << " phi=" << phi;
  }
}

TEST(Psi, VarianceGammaMatchesSimpsonOracle) {
  const sc::ExponentContext ctx(sc::LevyModel::variance_gamma(1.0, 1.0), 1.0);
  for (auto [u, phi] : {std::pair{0.5, 0.3}, {1.5, 0.8}, {2.7, 0.2}}) {
    const double expect = oracle::psi_vg(u, phi, 1.0, 1.0, 1.0);
    EXPECT_NEAR(sc::psi(ctx, u, phi), expect, 1e-7 * std::max(1.0, std::abs(expect)));
  }
}

// Quadrature agrees with a plain Monte Carlo average of (1+φY²)^u - 1.
TEST(Psi, QuadratureMatchesMonteCarlo) {
  const auto ctx = cpp_ctx();
  std::mt19937_64 g(5);
  std::normal_distribution<double> n01;
  for (auto [u, phi] : {std::pair{0.7, 0.4}, {1.6, 0.3}, {2.4, 0.2}}) {
    const std::size_t n = 1'000'000;
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = n01(g);
      const double v = std::pow(1.0 + phi * y * y, u) - 1.0;
      s += v;
      ss += v * v;
    }
    const double m = s / n;
    const double se = std::sqrt((ss / n - m * m) / n);
    EXPECT_LT(std::abs(sc::psi(ctx, u, phi) - (m - u)), 5.0 * se);
  }
}

TEST(Psi, ConvexInU) {
  const auto ctx = cpp_ctx();
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> uu(0.0, 4.0), ff(0.05, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double a = uu(g), b = uu(g), phi = ff(g);
    const double mid = sc::psi(ctx, 0.5 * (a + b), phi);
    EXPECT_LE(mid, 0.5 * (sc::psi(ctx, a, phi) + sc::psi(ctx, b, phi)) + 1e-10);
  }
}

TEST(Psi, CustomLawWithoutDensityOnlyIntegerOrders) {
  auto sampler = [](sc::Rng& g) { return std::uniform_real_distribution<double>(-1.0, 1.0)(g); };
  const sc::ExponentContext ctx(
      sc::LevyModel::compound_poisson(1.0, sc::CustomJumps{sampler, {0, 1.0 / 3, 0, 1.0 / 5, 0, 1.0 / 7, 0, 1.0 / 9}, {}}),
      1.0);
  // E[(1 + φY²)³] - 1 = 3φ/3 + 3φ²/5 + φ³/7.
  const double phi = 0.4;
  EXPECT_NEAR(sc::psi(ctx, 3.0, phi), phi + 0.6 * phi * phi + phi * phi * phi / 7.0 - 3.0, 1e-14);
  EXPECT_THROW(sc::psi(ctx, 2.5, phi), std::domain_error);
}

TEST(Psi, CustomLawWithDensity) {
  // Laplace(1) jumps: E[Y^{2k}] = (2k)!.
  auto sampler = [](sc::Rng& g) {
    const double e = std::exponential_distribution<double>(1.0)(g);
    return std::bernoulli_distribution(0.5)(g) ? e : -e;
  };
  auto density = [](double y) { return 0.5 * std::exp(-std::abs(y)); };
  const sc::ExponentContext ctx(
      sc::LevyModel::compound_poisson(1.0, sc::CustomJumps{sampler, {0, 2, 0, 24, 0, 720, 0, 40320}, density}), 1.0);
  const double phi = 0.2, u = 1.5;
  const double expect =
      -u + oracle::simpson([&](double y) { return std::exp(-y) * (std::pow(1.0 + phi * y * y, u) - 1.0); }, 0.0, 80.0,
                           400'000);
  EXPECT_NEAR(sc::psi(ctx, u, phi), expect, 1e-9);
  EXPECT_NEAR(sc::psi(ctx, 2.0, phi), 2.0 * phi * 2.0 + phi * phi * 24.0 - 2.0, 1e-9);
}

TEST(LogMoment, BasicProperties) {
  const auto ctx = cpp_ctx();
  EXPECT_EQ(sc::log_moment(ctx, 0.0), 0.0);
  for (double phi : {0.1, 0.5, 1.0, 2.0}) EXPECT_LT(sc::log_moment(ctx, phi), phi);
  const double at_one = sc::log_moment(ctx, 1.0);
  EXPECT_GT(at_one, 0.0);
  EXPECT_LT(at_one, 1.0);
  EXPECT_NEAR(at_one, oracle::log_moment_cpp(1.0), 1e-10);
}

TEST(LogMoment, MatchesMonteCarlo) {
  std::mt19937_64 g(9);
  std::normal_distribution<double> n01;
  const std::size_t n = 1'000'000;
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = n01(g);
    const double v = std::log1p(y * y);
    s += v;
    ss += v * v;
  }
  const double m = s / n;
  EXPECT_LT(std::abs(sc::log_moment(cpp_ctx(), 1.0) - m), 5.0 * std::sqrt((ss / n - m * m) / n));
}

TEST(PhiMax, RootOfLogMoment) {
  const auto ctx = cpp_ctx();
  const double pm = sc::phi_max(ctx);
  EXPECT_GT(pm, 1.0);
  EXPECT_LT(std::abs(sc::log_moment(ctx, pm) - 1.0), 1e-8);
  const double expect = oracle::bisect([](double p) { return oracle::log_moment_cpp(p) - 1.0; }, 1.0, 10.0, 1e-12);
  EXPECT_NEAR(pm, expect, 1e-8);
  EXPECT_GT(sc::phi_max(cpp_ctx(2.0)), pm);
}

TEST(PhiMax, VarianceGamma) {
  const sc::ExponentContext ctx(sc::LevyModel::variance_gamma(1.0, 1.0), 1.0);
  const double pm = sc::phi_max(ctx);
  EXPECT_LT(std::abs(sc::log_moment(ctx, pm) - 1.0), 1e-8);
  const double expect = oracle::bisect([](double p) { return oracle::log_moment_vg(p, 1.0, 1.0) - 1.0; }, 0.5, 5.0, 1e-10);
  EXPECT_NEAR(pm, expect, 1e-6);
}

TEST(Kappa, BracketAndResidual) {
  const auto ctx = cpp_ctx();
  const double k = sc::kappa_of_phi(ctx, 0.5);
  EXPECT_GT(k, 2.0);
  EXPECT_LT(k, 3.0);
  EXPECT_LT(std::abs(sc::psi(ctx, k, 0.5)), 1e-6);
  EXPECT_NEAR(k, oracle::bisect([](double u) { return oracle::psi_cpp(u, 0.5, 1.0); }, 2.0, 3.0, 1e-12), 1e-7);
}

TEST(Kappa, DecreasingInPhi) {
  const auto ctx = cpp_ctx();
  double prev = std::numeric_limits<double>::infinity();
  for (double phi : {0.1, 0.2, 0.3, 0.5, 0.8, 0.95, 1.5}) {
    const double k = sc::kappa_of_phi(ctx, phi);
    EXPECT_LT(k, prev);
    EXPECT_LT(std::abs(sc::psi(ctx, k, phi)), 1e-6);
    prev = k;
  }
}

TEST(Kappa, NoRootOutsideStationaryRegion) {
  const auto ctx = cpp_ctx();
  EXPECT_THROW(sc::kappa_of_phi(ctx, 0.0), sc::NoRoot);
  EXPECT_THROW(sc::kappa_of_phi(ctx, sc::phi_max(ctx) + 0.1), sc::NoRoot);
}

TEST(PhiMaxKappa, ClosedFormRoots) {
  const auto ctx = cpp_ctx();
  EXPECT_NEAR(sc::phi_max_kappa(ctx, 1.0), 1.0, 1e-9);
  EXPECT_NEAR(sc::phi_max_kappa(ctx, 2.0), (std::sqrt(7.0) - 1.0) / 3.0, 1e-9);
  EXPECT_LT(sc::phi_max_kappa(ctx, 2.0), sc::phi_max_kappa(ctx, 1.0));
  EXPECT_LT(sc::phi_max_kappa(ctx, 1.0), sc::phi_max(ctx));
}

TEST(PhiMaxKappa, InverseOfKappa) {
  const auto ctx = cpp_ctx();
  for (double kappa : {0.5, 1.5, 2.5, 4.0}) EXPECT_NEAR(sc::kappa_of_phi(ctx, sc::phi_max_kappa(ctx, kappa)), kappa, 1e-6);
}

TEST(HCross, Values) {
  const auto ctx = cpp_ctx();
  EXPECT_NEAR(sc::h_cross(ctx, 0.5, 0.2), -1.0, 1e-14);
  EXPECT_DOUBLE_EQ(sc::h_cross(ctx, 0.3, 0.7), sc::h_cross(ctx, 0.7, 0.3));
  for (double phi : {0.1, 0.5, 0.9}) EXPECT_NEAR(sc::h_cross(ctx, phi, phi), sc::psi(ctx, 2.0, phi), 1e-14);
}

TEST(MomentRegion, SignOfPsi) {
  const auto ctx = cpp_ctx();
  EXPECT_TRUE(sc::in_moment_region(ctx, 2.0, 0.5));
  EXPECT_FALSE(sc::in_moment_region(ctx, 2.0, 0.95));
  EXPECT_TRUE(sc::in_moment_region(ctx, 1.0, 0.95));
}
