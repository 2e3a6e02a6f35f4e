#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "supcogarch/charexp.hpp"
#include "supcogarch/levy.hpp"

namespace supcogarch {

// dV = (β - ηV) dt + φ V₋ dS.
struct CogarchParams {
  double beta = 1.0;
  double eta = 1.0;
  double phi = 0.0;
};

// Throws std::invalid_argument unless β > 0, η > 0, φ ≥ 0.
void validate(const CogarchParams& p);

// One mark of the driving subordinator. post_jump = left_limit + jump.
struct PathEvent {
  double time;
  double left_limit;
  double post_jump;
  double jump;
};

// Piecewise-deterministic path: relaxes towards β/η between events and
// jumps upward at events. Immutable.
class PathRecord {
 public:
  PathRecord() = default;
  PathRecord(Horizon horizon, double v0, double beta, double eta, std::vector<PathEvent> events);

  const Horizon& horizon() const { return horizon_; }
  double v0() const { return v0_; }
  double beta() const { return beta_; }
  double eta() const { return eta_; }
  std::span<const PathEvent> events() const { return events_; }

  // Right-continuous value at t ∈ [start, end].
  double value_at(double t) const;
  // V_{t-}; equals value_at(t) unless an event sits at t.
  double left_limit_at(double t) const;

  // The same path seen from t0 onward: start t0, v0 = value_at(t0).
  PathRecord restricted_from(double t0) const;

 private:
  double relax_from(std::size_t first_after, double t) const;

  Horizon horizon_;
  double v0_ = 0.0;
  double beta_ = 0.0;
  double eta_ = 1.0;
  std::vector<PathEvent> events_;
};

// β/η + (v - β/η) e^{-η dt}.
double relax(double v, double beta, double eta, double dt);

// Exact event-driven solution on s_path's horizon. One event per mark.
PathRecord simulate_cogarch(const CogarchParams& params, const JumpPath& s_path, double v0);

// `time,value,is_jump`; each event contributes its left limit and its
// post-jump value. Non-event rows sample a uniform grid of width grid_step
// (no grid when grid_step is absent).
void write_csv(std::ostream& out, const PathRecord& path, std::optional<double> grid_step = std::nullopt);

// Stationary moments. All throw MomentDiverges outside their moment region.
double stationary_mean(const CogarchParams& p, const LevyModel& model);
double stationary_second_moment(const CogarchParams& p, const LevyModel& model);
double stationary_variance(const CogarchParams& p, const LevyModel& model);
// β²φ²m2 / ((φm1-η)²(2η-2φm1-φ²m2)); same quantity without cancellation.
double stationary_variance_alt(const CogarchParams& p, const LevyModel& model);
double stationary_acov(const CogarchParams& p, const LevyModel& model, double h);

// Shared-driver pair (V^φ, V^φ̃) with φ = p.phi.
double cross_moment(const CogarchParams& p, double phi_t, const LevyModel& model);
double cross_cov(const CogarchParams& p, double phi_t, const LevyModel& model);
// Cov[V^φ_t, V^φ̃_{t+h}]: decays at rate Ψ(1, φ̃).
double cross_acov(const CogarchParams& p, double phi_t, const LevyModel& model, double h);

// Default burn-in: 40/|Ψ(1,φ)| when Ψ(1,φ) < 0, else 40/η.
double default_burn_in(const CogarchParams& p, const LevyModel& model);

// Approximate draws from the stationary law by burn-in from the stationary
// mean (β/η when the mean diverges). Construction checks stationarity once.
class StationarySampler {
 public:
  StationarySampler(const CogarchParams& params, const LevyModel& model,
                    std::optional<double> burn_in = std::nullopt);

  double burn_in() const { return burn_in_; }
  double start_value() const { return start_; }
  double draw(std::uint64_t seed) const;

 private:
  CogarchParams params_;
  LevyModel model_;
  double burn_in_;
  double start_;
};

// Throws NonStationary when φ ≥ φ_max.
double draw_stationary_v0(const CogarchParams& params, const LevyModel& model, std::uint64_t seed,
                          std::optional<double> burn_in = std::nullopt);

}  // namespace supcogarch
