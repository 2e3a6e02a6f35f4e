#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "supcogarch/supcogarch.hpp"

namespace supcogarch {

// ΔG_T = √(V̄_{T-}) ΔL_T at one mark of the driving L-path.
struct PriceJump {
  double time;
  double vol_left;
  double levy_jump;
  double increment;
};

// Pure-jump price G_t = ∫_{(start,t]} √(V̄_{s-}) dL_s; G(start) = 0.
class PricePath {
 public:
  PricePath(SupVariant variant, Horizon horizon, std::size_t driver_atom, std::vector<PriceJump> jumps);

  SupVariant variant() const { return variant_; }
  const Horizon& horizon() const { return horizon_; }
  std::size_t driver_atom() const { return driver_atom_; }
  std::span<const PriceJump> jumps() const { return jumps_; }

  double value_at(double t) const;

 private:
  SupVariant variant_;
  Horizon horizon_;
  std::size_t driver_atom_;
  std::vector<PriceJump> jumps_;
  std::vector<double> cumulative_;
};

// For Sup1 the atom whose L^{φ_i} drives G (default 0, the smallest φ).
// Sup2/Sup3 always use the shared driver; the atom index is only range-checked.
PricePath simulate_price(const SupPathBundle& bundle, std::optional<std::size_t> driver_atom = std::nullopt);

// `time,G`: the start, every jump time and, when given, a uniform grid.
void write_csv(std::ostream& out, const PricePath& price, std::optional<double> grid_step = std::nullopt);

// G(start+(k+1)r) - G(start+kr) for k = 0, 1, ... while inside the horizon.
std::vector<double> lattice_increments(const PricePath& price, double r);

struct IncrementMoments {
  double mean;
  double second_moment;
};

// E[Δ^rG] = 0 and E[(Δ^rG)²] = r E[L_1²] E[V̄_0].
IncrementMoments increment_mean_and_variance(SupVariant v, const SupModel& m, double r);

// Cov[Δ^rG_t, Δ^rG_{t+h}] = 0 for h ≥ r > 0.
double increment_autocov(SupVariant v, const SupModel& m, double r, double h);

// Cov[(Δ^rG_0)², V^{φ_atom}_r] for Sup1/Sup2.
double sq_increment_inner_cov(SupVariant v, const SupModel& m, double r, std::size_t atom,
                              std::size_t driver_atom = 0);

// Cov[(Δ^rG_t)², (Δ^rG_{t+h})²] for Sup1/Sup2, h ≥ r > 0.
double sq_increment_cov_closed(SupVariant v, const SupModel& m, double r, double h, std::size_t driver_atom = 0);

// Lag-free inner covariances of supCOGARCH 3, usually Monte Carlo estimates:
// Cov[(Δ^rG_0)², V̄_r] and Cov[(Δ^rG_0)², V^{φ_i}_r] per atom.
struct Sup3InnerCovariances {
  double aggregate;
  std::vector<double> per_atom;
};

// The supCOGARCH 3 lag kernel applied to the given inner covariances.
double sq_increment_cov_sup3(const SupModel& m, double r, double h, const Sup3InnerCovariances& inner);

}  // namespace supcogarch
