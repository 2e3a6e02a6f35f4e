#pragma once

#include <functional>

#include "supcogarch/levy.hpp"

namespace supcogarch {

// A driver together with the mean-reversion rate η. Everything the Laplace
// exponent Ψ(u, φ) = -ηu + ∫((1+φy)^u - 1) ν_S(dy) needs.
class ExponentContext {
 public:
  ExponentContext(LevyModel model, double eta);

  const LevyModel& model() const { return model_; }
  double eta() const { return eta_; }
  const SMoments& s() const { return s_; }

 private:
  LevyModel model_;
  double eta_;
  SMoments s_;
};

// ∫_{R+} g(y) ν_S(dy) by segment-wise adaptive Gauss–Kronrod quadrature on
// geometrically growing segments of the L-jump axis. Throws DivergentIntegral
// when the segment contributions stop shrinking for three consecutive
// refinements. Returns +inf if the partial sums overflow.
double integrate_s_measure(const LevyModel& model, const std::function<double(double)>& g);

// Ψ(u, φ). Closed forms at u = 1, 2; quadrature otherwise.
double psi(const ExponentContext& ctx, double u, double phi);

// ∫ log(1 + φy) ν_S(dy).
double log_moment(const ExponentContext& ctx, double phi);

// Root of log_moment(φ) = η; the stationary region is [0, phi_max).
double phi_max(const ExponentContext& ctx);

// The unique κ > 0 with Ψ(κ, φ) = 0. Throws NoRoot outside (0, phi_max).
double kappa_of_phi(const ExponentContext& ctx, double phi);

// Root in φ of Ψ(κ, φ) = 0: upper end of the κ-th moment region.
double phi_max_kappa(const ExponentContext& ctx, double kappa);

// h(φ, φ̃) = -2η + (φ+φ̃) E[S_1] + φφ̃ Var[S_1]; h(φ, φ) = Ψ(2, φ).
double h_cross(const ExponentContext& ctx, double phi, double phi_t);

// True when Ψ(κ, φ) < 0, i.e. φ lies in the κ-th moment region.
bool in_moment_region(const ExponentContext& ctx, double kappa, double phi);

}  // namespace supcogarch
