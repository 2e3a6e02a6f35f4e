#include "supcogarch/charexp.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "supcogarch/errors.hpp"

namespace supcogarch {

namespace {

constexpr double kSegmentRelTol = 1e-14;
constexpr int kMaxDoublings = 80;
constexpr int kDivergenceRun = 3;
// Segments start at 8 jump-scales; divergence is only declared once the
// segment edge is 2^10 times further out, past the bulk of any integrand
// with light tails.
constexpr double kFirstSegmentScales = 8.0;
constexpr double kDivergenceEdgeFactor = 1024.0;

constexpr double kRootWidthPhi = 1e-11;
constexpr double kRootWidthKappa = 1e-10;

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

double integrate_segment(const std::function<double(double)>& f, double a, double b) {
  return GaussKronrod::integrate(f, a, b, 15, 1e-13);
}

// ∫_0^∞ f(y) dy over [0,R0], [R0,2R0], [2R0,4R0], ...
double integrate_half_line(const std::function<double(double)>& f, double scale) {
  const double first_edge = kFirstSegmentScales * scale;
  const double divergence_edge = kDivergenceEdgeFactor * first_edge;
  double total = integrate_segment(f, 0.0, first_edge);
  double previous_increment = std::abs(total);
  int nondecreasing_run = 0;
  double lo = first_edge;
  for (int k = 0; k < kMaxDoublings; ++k) {
    const double hi = 2.0 * lo;
    const double increment = integrate_segment(f, lo, hi);
    total += increment;
    if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
    const double magnitude = std::abs(increment);
    if (magnitude <= kSegmentRelTol * std::abs(total) || magnitude < 1e-300) return total;
    nondecreasing_run = (magnitude >= previous_increment) ? nondecreasing_run + 1 : 0;
    if (nondecreasing_run >= kDivergenceRun && hi >= divergence_edge)
      throw DivergentIntegral("Lévy-measure integral grows without bound under refinement");
    previous_increment = magnitude;
    lo = hi;
  }
  throw DivergentIntegral("Lévy-measure integral did not settle within the refinement budget");
}

double std_normal_pdf(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }

bool custom_without_density(const LevyModel& model) {
  const auto* cp = std::get_if<CompoundPoisson>(&model.variant());
  if (cp == nullptr) return false;
  const auto* custom = std::get_if<CustomJumps>(&cp->jumps);
  return custom != nullptr && !custom->density;
}

// E[(1+φY²)^u - 1] * rate by binomial expansion, integer u ≤ 4.
double binomial_psi_integral(const CompoundPoisson& cp, int u, double phi) {
  const auto& moments = std::get<CustomJumps>(cp.jumps).raw_moments;
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 1; k <= u; ++k) {
    binom = binom * (u - k + 1) / k;
    sum += binom * std::pow(phi, k) * moments[2 * k - 1];
  }
  return cp.rate * sum;
}

double psi_or_inf(const ExponentContext& ctx, double u, double phi) {
  try {
    return psi(ctx, u, phi);
  } catch (const DivergentIntegral&) {
    return std::numeric_limits<double>::infinity();
  }
}

template <class F>
double bisect_root(F f, double lo, double hi, double width) {
  auto done = [width](double a, double b) { return std::abs(b - a) <= width; };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, done);
  return 0.5 * (a + b);
}

}  // namespace

ExponentContext::ExponentContext(LevyModel model, double eta)
    : model_(std::move(model)), eta_(eta), s_(s_moments(model_)) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
}

double integrate_s_measure(const LevyModel& model, const std::function<double(double)>& g) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CompoundPoisson>) {
          if (std::holds_alternative<StandardNormalJumps>(v.jumps)) {
            auto f = [&](double y) { return 2.0 * g(y * y) * std_normal_pdf(y); };
            return v.rate * integrate_half_line(f, 1.0);
          }
          const auto& custom = std::get<CustomJumps>(v.jumps);
          if (!custom.density)
            throw std::domain_error("custom jump law without density: only integer exponents up to 4 are available");
          auto f = [&](double y) { return g(y * y) * (custom.density(y) + custom.density(-y)); };
          return v.rate * integrate_half_line(f, std::sqrt(custom.raw_moments[1]));
        } else {
          // ν_L(dy) = exp(-c|y|) / (ν|y|) dy with c = sqrt(2/ν) / σ.
          const double c = std::sqrt(2.0 / v.nu) / v.sigma;
          auto f = [&](double y) { return 2.0 * g(y * y) * std::exp(-c * y) / (v.nu * y); };
          return integrate_half_line(f, 1.0 / c);
        }
      },
      model.variant());
}

double psi(const ExponentContext& ctx, double u, double phi) {
  if (!(u >= 0.0)) throw std::invalid_argument("psi: u must be nonnegative");
  if (!(phi >= 0.0)) throw std::invalid_argument("psi: phi must be nonnegative");
  const double eta = ctx.eta();
  if (phi == 0.0 || u == 0.0) return -eta * u;
  const auto& s = ctx.s();
  if (u == 1.0) return phi * s.m1 - eta;
  if (u == 2.0) return 2.0 * phi * s.m1 + phi * phi * s.m2 - 2.0 * eta;
  if (custom_without_density(ctx.model())) {
    if (u == std::floor(u) && u <= 4.0)
      return -eta * u + binomial_psi_integral(std::get<CompoundPoisson>(ctx.model().variant()),
                                              static_cast<int>(u), phi);
    throw std::domain_error("psi: custom jump law without density supports integer u <= 4 only");
  }
  auto g = [u, phi](double y) { return std::expm1(u * std::log1p(phi * y)); };
  return -eta * u + integrate_s_measure(ctx.model(), g);
}

double log_moment(const ExponentContext& ctx, double phi) {
  if (!(phi >= 0.0)) throw std::invalid_argument("log_moment: phi must be nonnegative");
  if (phi == 0.0) return 0.0;
  return integrate_s_measure(ctx.model(), [phi](double y) { return std::log1p(phi * y); });
}

double phi_max(const ExponentContext& ctx) {
  const double eta = ctx.eta();
  auto f = [&](double phi) { return log_moment(ctx, phi) - eta; };
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) throw NoRoot("phi_max: log moment never reaches eta");
  }
  return bisect_root(f, lo, hi, kRootWidthPhi);
}

double kappa_of_phi(const ExponentContext& ctx, double phi) {
  if (!(phi > 0.0)) throw NoRoot("kappa_of_phi: phi must be positive (the tail exponent is infinite at 0)");
  if (phi >= phi_max(ctx)) throw NoRoot("kappa_of_phi: phi outside the stationary region");
  auto f = [&](double u) { return psi_or_inf(ctx, u, phi); };
  double lo = 1.0;
  double hi = 1.0;
  if (f(1.0) < 0.0) {
    hi = 2.0;
    while (f(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e4) throw NoRoot("kappa_of_phi: no sign change below u = 1e4");
    }
  } else {
    lo = 0.5;
    while (f(lo) >= 0.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-12) throw NoRoot("kappa_of_phi: psi is nonnegative near u = 0");
    }
  }
  return bisect_root(f, lo, hi, kRootWidthKappa);
}

double phi_max_kappa(const ExponentContext& ctx, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("phi_max_kappa: kappa must be positive");
  auto f = [&](double phi) { return psi_or_inf(ctx, kappa, phi); };
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) throw NoRoot("phi_max_kappa: psi never turns positive");
  }
  return bisect_root(f, lo, hi, kRootWidthPhi);
}

double h_cross(const ExponentContext& ctx, double phi, double phi_t) {
  const auto& s = ctx.s();
  return -2.0 * ctx.eta() + (phi + phi_t) * s.m1 + phi * phi_t * s.m2;
}

bool in_moment_region(const ExponentContext& ctx, double kappa, double phi) {
  return psi_or_inf(ctx, kappa, phi) < 0.0;
}

}  // namespace supcogarch
