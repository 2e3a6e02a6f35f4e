#include "supcogarch/price.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "supcogarch/errors.hpp"

namespace supcogarch {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require_increment(double r, double h) {
  if (!(r > 0.0)) throw std::invalid_argument("increment length r must be positive");
  if (!(h >= r)) throw std::invalid_argument("lag h must satisfy h >= r");
}

// Hypotheses shared by the squared-increment results: finite E[L_1⁴],
// vanishing third Lévy moment, π ≠ δ_0.
void require_fourth_order(const SupModel& m) {
  const auto l = l_moments(m.levy);
  if (!std::isfinite(l.e4)) throw MomentDiverges("E[L_1^4] is infinite");
  if (std::abs(l.third_levy_moment) > kSymmetryTolerance)
    throw std::domain_error("squared-increment covariance needs a vanishing third Levy moment");
  if (m.mixture.phi_bar() == 0.0) throw std::invalid_argument("squared-increment covariance needs pi != delta_0");
}

double psi1(const SupModel& m, double phi) { return phi * s_moments(m.levy).m1 - m.eta; }

// (e^{hΨ} - e^{(h-r)Ψ}) / Ψ = ∫_h^{h+r} e^{(s-r)Ψ} ds.
double lag_kernel(double psi, double r, double h) {
  return (std::exp(h * psi) - std::exp((h - r) * psi)) / psi;
}

}  // namespace

PricePath::PricePath(SupVariant variant, Horizon horizon, std::size_t driver_atom, std::vector<PriceJump> jumps)
    : variant_(variant), horizon_(horizon), driver_atom_(driver_atom), jumps_(std::move(jumps)) {
  cumulative_.reserve(jumps_.size());
  double g = 0.0;
  for (const auto& j : jumps_) {
    g += j.increment;
    cumulative_.push_back(g);
  }
}

double PricePath::value_at(double t) const {
  auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                             [](double x, const PriceJump& j) { return x < j.time; });
  const auto idx = static_cast<std::size_t>(it - jumps_.begin());
  return idx == 0 ? 0.0 : cumulative_[idx - 1];
}

PricePath simulate_price(const SupPathBundle& bundle, std::optional<std::size_t> driver_atom) {
  const std::size_t atom = driver_atom.value_or(0);
  if (atom >= bundle.mixture.size()) throw std::out_of_range("simulate_price: driver atom out of range");
  const std::size_t driver = bundle.variant == SupVariant::Sup1 ? atom : 0;
  if (driver >= bundle.drivers.size()) throw std::invalid_argument("simulate_price: bundle carries no driver path");
  std::vector<PriceJump> jumps;
  for (const auto& m : bundle.drivers[driver].marks()) {
    const double vol = bundle.aggregate.left_limit_at(m.time);
    jumps.push_back({m.time, vol, m.size, std::sqrt(vol) * m.size});
  }
  return PricePath(bundle.variant, bundle.horizon, atom, std::move(jumps));
}

void write_csv(std::ostream& out, const PricePath& price, std::optional<double> grid_step) {
  if (grid_step && !(*grid_step > 0.0)) throw std::invalid_argument("write_csv: grid step must be positive");
  std::vector<double> times{price.horizon().start};
  for (const auto& j : price.jumps()) times.push_back(j.time);
  if (grid_step) {
    const auto steps = static_cast<std::size_t>(std::floor(price.horizon().length() / *grid_step + 1e-9));
    for (std::size_t k = 1; k <= steps; ++k)
      times.push_back(price.horizon().start + static_cast<double>(k) * *grid_step);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const auto old_precision = out.precision(17);
  out << "time,G\n";
  for (double t : times) out << t << ',' << price.value_at(t) << '\n';
  out.precision(old_precision);
}

std::vector<double> lattice_increments(const PricePath& price, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("lattice_increments: r must be positive");
  const auto& h = price.horizon();
  const auto count = static_cast<std::size_t>(std::floor(h.length() / r + 1e-9));
  std::vector<double> out;
  out.reserve(count);
  double prev = price.value_at(h.start);
  for (std::size_t k = 1; k <= count; ++k) {
    const double g = price.value_at(h.start + static_cast<double>(k) * r);
    out.push_back(g - prev);
    prev = g;
  }
  return out;
}

IncrementMoments increment_mean_and_variance(SupVariant v, const SupModel& m, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("increment length r must be positive");
  const ExponentContext ctx(m.levy, m.eta);
  for (const auto& a : m.mixture.atoms())
    if (!in_moment_region(ctx, 0.5, a.phi)) throw MomentDiverges("E[(V^phi)^(1/2)] is infinite for some atom");
  const double e2 = l_moments(m.levy).e2;
  return {0.0, r * e2 * sup_mean(v, m)};
}

double increment_autocov(SupVariant, const SupModel&, double r, double h) {
  require_increment(r, h);
  return 0.0;
}

double sq_increment_inner_cov(SupVariant v, const SupModel& m, double r, std::size_t atom, std::size_t driver_atom) {
  if (v == SupVariant::Sup3) throw std::invalid_argument("sq_increment_inner_cov: no closed form for sup3");
  if (!(r > 0.0)) throw std::invalid_argument("increment length r must be positive");
  if (atom >= m.mixture.size() || driver_atom >= m.mixture.size())
    throw std::out_of_range("sq_increment_inner_cov: atom index out of range");
  require_fourth_order(m);
  const double phi = m.mixture[atom].phi;
  const double psi = psi1(m, phi);
  const auto s = s_moments(m.levy);
  const double e2 = l_moments(m.levy).e2;
  const double cov = component_aggregate_cov(v, m, atom);
  double inner = e2 * cov;
  const bool shares_driver = v == SupVariant::Sup2 || atom == driver_atom;
  if (shares_driver) {
    const double joint = cov + stationary_mean({m.beta, m.eta, phi}, m.levy) * sup_mean(v, m);
    inner += phi * s.m2 * joint;
  }
  return std::expm1(psi * r) / psi * inner;
}

double sq_increment_cov_closed(SupVariant v, const SupModel& m, double r, double h, std::size_t driver_atom) {
  if (v == SupVariant::Sup3) throw std::invalid_argument("sq_increment_cov_closed: use sq_increment_cov_sup3");
  require_increment(r, h);
  const double e2 = l_moments(m.levy).e2;
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    sum += m.mixture[i].weight * lag_kernel(psi1(m, m.mixture[i].phi), r, h) *
           sq_increment_inner_cov(v, m, r, i, driver_atom);
  return e2 * sum;
}

double sq_increment_cov_sup3(const SupModel& m, double r, double h, const Sup3InnerCovariances& inner) {
  require_increment(r, h);
  require_fourth_order(m);
  if (inner.per_atom.size() != m.mixture.size())
    throw std::invalid_argument("sq_increment_cov_sup3: one inner covariance per atom is required");
  if (!std::isfinite(inner.aggregate) ||
      !std::all_of(inner.per_atom.begin(), inner.per_atom.end(), [](double x) { return std::isfinite(x); }))
    throw std::invalid_argument("sq_increment_cov_sup3: inner covariance estimates must be finite");
  for (const auto& a : m.mixture.atoms())
    if (!(2.0 * a.phi * s_moments(m.levy).m1 + a.phi * a.phi * s_moments(m.levy).m2 < 2.0 * m.eta))
      throw MomentDiverges("sq_increment_cov_sup3: some atom lies outside the second-moment region");
  const double eta = m.eta;
  const double decay = (std::exp(-eta * (h - r)) - std::exp(-eta * h)) / eta;
  double sum = decay * inner.aggregate;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    sum += m.mixture[i].weight * (lag_kernel(psi1(m, m.mixture[i].phi), r, h) - decay) * inner.per_atom[i];
  return l_moments(m.levy).e2 * sum;
}

}  // namespace supcogarch
