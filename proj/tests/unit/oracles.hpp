#pragma once

// Reference computations that share no code with the library: plain Simpson
// quadrature, bisection, moment systems from the generator of (V^{φ_i}, V̄),
// and RK4 for the lagged moments.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double normal_pdf(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }

// E[f(Y)], Y ~ N(0, 1).
inline double normal_expect(const std::function<double(double)>& f) {
  return simpson([&](double y) { return f(y) * normal_pdf(y); }, -40.0, 40.0, 400'000);
}

// Ψ(u, φ) for a compound Poisson driver with N(0, 1) jumps.
inline double psi_cpp(double u, double phi, double eta, double rate = 1.0) {
  return -eta * u + rate * normal_expect([&](double y) { return std::pow(1.0 + phi * y * y, u) - 1.0; });
}

inline double log_moment_cpp(double phi, double rate = 1.0) {
  return rate * normal_expect([&](double y) { return std::log1p(phi * y * y); });
}

// VG driver, θ = 0: ν_L(dy) = e^{-c|y|} / (ν|y|) dy with c = √(2/ν)/σ.
inline double vg_integral(const std::function<double(double)>& g_of_y2, double sigma, double nu) {
  const double c = std::sqrt(2.0 / nu) / sigma;
  const double upper = 400.0 / c;
  auto integrand = [&](double y) {
    if (y == 0.0) return 0.0;
    return g_of_y2(y * y) * std::exp(-c * y) / (nu * y);
  };
  return 2.0 * simpson(integrand, 0.0, upper, 2'000'000);
}

inline double psi_vg(double u, double phi, double eta, double sigma, double nu) {
  return -eta * u + vg_integral([&](double s) { return std::pow(1.0 + phi * s, u) - 1.0; }, sigma, nu);
}

inline double log_moment_vg(double phi, double sigma, double nu) {
  return vg_integral([&](double s) { return std::log1p(phi * s); }, sigma, nu);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo);
  while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Driver summaries: m1 = ∫ y ν_S(dy), m2 = ∫ y² ν_S(dy).
struct Driver {
  double m1;
  double m2;
};

struct Atom {
  double phi;
  double p;
};

// E[V^φ] from 0 = β - ηE[V] + φ m1 E[V].
inline double mean(double beta, double eta, double phi, const Driver& d) { return beta / (eta - phi * d.m1); }

// E[V^a V^b] for two components of one driver, from the generator of the
// product: jumps contribute (1+aΔS)(1+bΔS) - 1.
inline double joint_moment(double beta, double eta, double a, double b, const Driver& d) {
  return beta * (mean(beta, eta, a, d) + mean(beta, eta, b, d)) / (2.0 * eta - (a + b) * d.m1 - a * b * d.m2);
}

inline double mixture_mean(double beta, double eta, const std::vector<Atom>& pi, const Driver& d) {
  double s = 0.0;
  for (const auto& a : pi) s += a.p * mean(beta, eta, a.phi, d);
  return s;
}

// E[V^i V^j] with independent drivers for i != j.
inline double pair_moment(bool shared, double beta, double eta, const Atom& a, const Atom& b, bool same,
                          const Driver& d) {
  if (same || shared) return joint_moment(beta, eta, a.phi, b.phi, d);
  return mean(beta, eta, a.phi, d) * mean(beta, eta, b.phi, d);
}

// Sup3: V̄ jumps by φ_T V^{φ_T}₋ ΔS with φ_T ~ π independent of everything.
// Returns E[V̄ V^i] for every atom.
inline std::vector<double> sup3_aggregate_component(double beta, double eta, const std::vector<Atom>& pi,
                                                    const Driver& d) {
  const double ebar = mixture_mean(beta, eta, pi, d);
  std::vector<double> out;
  for (const auto& ai : pi) {
    double jump = 0.0;
    for (const auto& aj : pi) jump += aj.p * aj.phi * (d.m1 + ai.phi * d.m2) * joint_moment(beta, eta, aj.phi, ai.phi, d);
    out.push_back((beta * (ebar + mean(beta, eta, ai.phi, d)) + jump) / (2.0 * eta - ai.phi * d.m1));
  }
  return out;
}

inline double sup3_second_moment(double beta, double eta, const std::vector<Atom>& pi, const Driver& d) {
  const double ebar = mixture_mean(beta, eta, pi, d);
  const auto cross = sup3_aggregate_component(beta, eta, pi, d);
  double jump = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    jump += pi[i].p * pi[i].phi * (2.0 * d.m1 * cross[i] + pi[i].phi * d.m2 * joint_moment(beta, eta, pi[i].phi, pi[i].phi, d));
  return (2.0 * beta * ebar + jump) / (2.0 * eta);
}

// Integrates y' = f(y) from 0 to h by classical RK4.
inline std::vector<double> rk4(std::vector<double> y, double h,
                               const std::function<std::vector<double>(const std::vector<double>&)>& f,
                               std::size_t steps = 20'000) {
  const double dt = h / static_cast<double>(steps);
  auto axpy = [](const std::vector<double>& a, const std::vector<double>& b, double s) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const auto k1 = f(y);
    const auto k2 = f(axpy(y, k1, dt / 2));
    const auto k3 = f(axpy(y, k2, dt / 2));
    const auto k4 = f(axpy(y, k3, dt));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y;
}

// Cov[V̄_0, V̄_h] for Sup1 (shared = false) or Sup2 (shared = true): the
// columns C_j(h) = E[V̄_0 V^j_h] obey C_j' = β E[V̄] + (φ_j m1 - η) C_j.
inline double sup12_acov(bool shared, double beta, double eta, const std::vector<Atom>& pi, const Driver& d, double h) {
  const double ebar = mixture_mean(beta, eta, pi, d);
  std::vector<double> c0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) s += pi[i].p * pair_moment(shared, beta, eta, pi[i], pi[j], i == j, d);
    c0.push_back(s);
  }
  const auto c = rk4(c0, h, [&](const std::vector<double>& y) {
    std::vector<double> dy(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) dy[j] = beta * ebar + (pi[j].phi * d.m1 - eta) * y[j];
    return dy;
  });
  double s = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) s += pi[j].p * c[j];
  return s - ebar * ebar;
}

// Cov[V̄_0, V̄_h] for Sup3: A = E[V̄_0 V̄_h], B_i = E[V̄_0 V^i_h];
// A' = βE[V̄] - ηA + m1 Σ p_j φ_j B_j and B_i' = βE[V̄] + (φ_i m1 - η) B_i.
inline double sup3_acov(double beta, double eta, const std::vector<Atom>& pi, const Driver& d, double h) {
  const double ebar = mixture_mean(beta, eta, pi, d);
  std::vector<double> y0{sup3_second_moment(beta, eta, pi, d)};
  for (double b : sup3_aggregate_component(beta, eta, pi, d)) y0.push_back(b);
  const auto y = rk4(y0, h, [&](const std::vector<double>& v) {
    std::vector<double> dv(v.size());
    dv[0] = beta * ebar - eta * v[0];
    for (std::size_t j = 0; j < pi.size(); ++j) {
      dv[0] += d.m1 * pi[j].p * pi[j].phi * v[j + 1];
      dv[j + 1] = beta * ebar + (pi[j].phi * d.m1 - eta) * v[j + 1];
    }
    return dv;
  });
  return y[0] - ebar * ebar;
}

}  // namespace oracle
