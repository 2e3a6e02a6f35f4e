#include "supcogarch/cogarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "supcogarch/errors.hpp"

namespace supcogarch {

namespace {

constexpr double kBurnInRelaxationTimes = 40.0;

double psi1(const CogarchParams& p, const SMoments& s) { return p.phi * s.m1 - p.eta; }
double psi2(const CogarchParams& p, const SMoments& s) {
  return 2.0 * p.phi * s.m1 + p.phi * p.phi * s.m2 - 2.0 * p.eta;
}

void require_first_moment(const CogarchParams& p, const SMoments& s) {
  if (!(psi1(p, s) < 0.0)) throw MomentDiverges("stationary mean is infinite: Ψ(1,φ) ≥ 0");
}

void require_second_moment(const CogarchParams& p, const SMoments& s) {
  if (!(psi2(p, s) < 0.0)) throw MomentDiverges("stationary second moment is infinite: Ψ(2,φ) ≥ 0");
}

}  // namespace

void validate(const CogarchParams& p) {
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) throw std::invalid_argument("beta must be positive");
  if (!(p.eta > 0.0) || !std::isfinite(p.eta)) throw std::invalid_argument("eta must be positive");
  if (!(p.phi >= 0.0) || !std::isfinite(p.phi)) throw std::invalid_argument("phi must be nonnegative");
}

double relax(double v, double beta, double eta, double dt) {
  const double level = beta / eta;
  return v + (level - v) * -std::expm1(-eta * dt);
}

PathRecord::PathRecord(Horizon horizon, double v0, double beta, double eta, std::vector<PathEvent> events)
    : horizon_(horizon), v0_(v0), beta_(beta), eta_(eta), events_(std::move(events)) {
  double prev = horizon_.start;
  for (const auto& e : events_) {
    if (!(e.time > prev) || e.time > horizon_.end)
      throw std::invalid_argument("PathRecord: event times must be strictly increasing inside the horizon");
    prev = e.time;
  }
}

double PathRecord::relax_from(std::size_t first_after, double t) const {
  if (first_after == 0) return relax(v0_, beta_, eta_, t - horizon_.start);
  const auto& e = events_[first_after - 1];
  return relax(e.post_jump, beta_, eta_, t - e.time);
}

double PathRecord::value_at(double t) const {
  auto it = std::upper_bound(events_.begin(), events_.end(), t,
                             [](double x, const PathEvent& e) { return x < e.time; });
  const auto idx = static_cast<std::size_t>(it - events_.begin());
  if (idx > 0 && events_[idx - 1].time == t) return events_[idx - 1].post_jump;
  return relax_from(idx, t);
}

double PathRecord::left_limit_at(double t) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), t,
                             [](const PathEvent& e, double x) { return e.time < x; });
  const auto idx = static_cast<std::size_t>(it - events_.begin());
  if (idx < events_.size() && events_[idx].time == t) return events_[idx].left_limit;
  return relax_from(idx, t);
}

PathRecord PathRecord::restricted_from(double t0) const {
  auto first = std::upper_bound(events_.begin(), events_.end(), t0,
                                [](double x, const PathEvent& e) { return x < e.time; });
  return PathRecord(Horizon{t0, horizon_.end}, value_at(t0), beta_, eta_,
                    std::vector<PathEvent>(first, events_.end()));
}

PathRecord simulate_cogarch(const CogarchParams& params, const JumpPath& s_path, double v0) {
  validate(params);
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw std::invalid_argument("simulate_cogarch: v0 must be positive");
  if (!s_path.is_subordinator())
    throw std::invalid_argument("simulate_cogarch: driving path must be a subordinator path");
  std::vector<PathEvent> events;
  events.reserve(s_path.size());
  double v = v0;
  double t = s_path.horizon().start;
  for (const auto& m : s_path.marks()) {
    const double left = relax(v, params.beta, params.eta, m.time - t);
    const double jump = params.phi * left * m.size;
    v = left + jump;
    t = m.time;
    events.push_back({m.time, left, v, jump});
  }
  return PathRecord(s_path.horizon(), v0, params.beta, params.eta, std::move(events));
}

void write_csv(std::ostream& out, const PathRecord& path, std::optional<double> grid_step) {
  if (grid_step && !(*grid_step > 0.0)) throw std::invalid_argument("write_csv: grid step must be positive");
  const auto old_precision = out.precision(17);
  out << "time,value,is_jump\n";
  const auto& h = path.horizon();
  const auto events = path.events();
  std::size_t next_event = 0;
  auto flush_events_before = [&](double t) {
    for (; next_event < events.size() && events[next_event].time < t; ++next_event) {
      const auto& e = events[next_event];
      out << e.time << ',' << e.left_limit << ",1\n";
      out << e.time << ',' << e.post_jump << ",1\n";
    }
  };
  if (grid_step) {
    const auto steps = static_cast<std::size_t>(std::floor(h.length() / *grid_step + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = h.start + static_cast<double>(k) * *grid_step;
      flush_events_before(t);
      if (next_event < events.size() && events[next_event].time == t) continue;
      out << t << ',' << path.value_at(t) << ",0\n";
    }
  } else {
    out << h.start << ',' << path.v0() << ",0\n";
  }
  flush_events_before(std::numeric_limits<double>::infinity());
  out.precision(old_precision);
}

double stationary_mean(const CogarchParams& p, const LevyModel& model) {
  validate(p);
  const auto s = s_moments(model);
  require_first_moment(p, s);
  return -p.beta / psi1(p, s);
}

double stationary_second_moment(const CogarchParams& p, const LevyModel& model) {
  validate(p);
  const auto s = s_moments(model);
  require_second_moment(p, s);
  return 2.0 * p.beta * p.beta / (psi1(p, s) * psi2(p, s));
}

double stationary_variance(const CogarchParams& p, const LevyModel& model) {
  const double mean = stationary_mean(p, model);
  return stationary_second_moment(p, model) - mean * mean;
}

double stationary_variance_alt(const CogarchParams& p, const LevyModel& model) {
  validate(p);
  const auto s = s_moments(model);
  require_second_moment(p, s);
  const double a = p.phi * s.m1 - p.eta;
  return p.beta * p.beta * p.phi * p.phi * s.m2 / (a * a * -psi2(p, s));
}

double stationary_acov(const CogarchParams& p, const LevyModel& model, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("stationary_acov: lag must be nonnegative");
  const auto s = s_moments(model);
  return std::exp(h * psi1(p, s)) * stationary_variance_alt(p, model);
}

namespace {

void require_cross(const CogarchParams& p, double phi_t, const SMoments& s) {
  CogarchParams q = p;
  q.phi = phi_t;
  validate(p);
  validate(q);
  require_second_moment(p, s);
  require_second_moment(q, s);
}

}  // namespace

double cross_moment(const CogarchParams& p, double phi_t, const LevyModel& model) {
  const auto s = s_moments(model);
  require_cross(p, phi_t, s);
  const double a = p.phi * s.m1 - p.eta;
  const double b = phi_t * s.m1 - p.eta;
  const double h = -2.0 * p.eta + (p.phi + phi_t) * s.m1 + p.phi * phi_t * s.m2;
  return p.beta * p.beta * ((p.phi + phi_t) * s.m1 - 2.0 * p.eta) / (a * b * h);
}

double cross_cov(const CogarchParams& p, double phi_t, const LevyModel& model) {
  const auto s = s_moments(model);
  require_cross(p, phi_t, s);
  const double a = p.phi * s.m1 - p.eta;
  const double b = phi_t * s.m1 - p.eta;
  const double h = -2.0 * p.eta + (p.phi + phi_t) * s.m1 + p.phi * phi_t * s.m2;
  return p.beta * p.beta * p.phi * phi_t * s.m2 / (a * b * -h);
}

double cross_acov(const CogarchParams& p, double phi_t, const LevyModel& model, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("cross_acov: lag must be nonnegative");
  const auto s = s_moments(model);
  return std::exp(h * (phi_t * s.m1 - p.eta)) * cross_cov(p, phi_t, model);
}

double default_burn_in(const CogarchParams& p, const LevyModel& model) {
  validate(p);
  const double rate = psi1(p, s_moments(model));
  return rate < 0.0 ? kBurnInRelaxationTimes / -rate : kBurnInRelaxationTimes / p.eta;
}

StationarySampler::StationarySampler(const CogarchParams& params, const LevyModel& model,
                                     std::optional<double> burn_in)
    : params_(params), model_(model), burn_in_(0.0), start_(params.beta / params.eta) {
  validate(params);
  if (params.phi > 0.0) {
    const ExponentContext ctx(model, params.eta);
    if (!(params.phi < phi_max(ctx))) throw NonStationary("phi is outside the stationary region [0, phi_max)");
  }
  if (burn_in && !(*burn_in > 0.0)) throw std::invalid_argument("burn-in must be positive");
  burn_in_ = burn_in.value_or(default_burn_in(params, model));
  if (psi1(params, s_moments(model)) < 0.0) start_ = stationary_mean(params, model);
}

double StationarySampler::draw(std::uint64_t seed) const {
  if (params_.phi == 0.0) return params_.beta / params_.eta;
  const auto l_path = simulate_levy_path(model_, Horizon{-burn_in_, 0.0}, seed);
  return simulate_cogarch(params_, squared_jumps(l_path), start_).value_at(0.0);
}

double draw_stationary_v0(const CogarchParams& params, const LevyModel& model, std::uint64_t seed,
                          std::optional<double> burn_in) {
  return StationarySampler(params, model, burn_in).draw(seed);
}

}  // namespace supcogarch
