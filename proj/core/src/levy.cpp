#include "supcogarch/levy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace supcogarch {

namespace {

constexpr double kCenteringTolerance = 1e-12;

void validate_jumps(const JumpLaw& law) {
  if (const auto* custom = std::get_if<CustomJumps>(&law)) {
    if (!custom->sample) throw std::invalid_argument("custom jump law: sampler is required");
    if (custom->raw_moments.size() < 8)
      throw std::invalid_argument("custom jump law: raw moments up to order 8 are required");
    for (double m : custom->raw_moments)
      if (!std::isfinite(m)) throw std::invalid_argument("custom jump law: raw moments must be finite");
    if (std::abs(custom->raw_moments[0]) > kCenteringTolerance)
      throw std::invalid_argument("custom jump law: jumps must be centred (E[Y] = 0)");
    for (std::size_t k = 2; k <= 8; k += 2)
      if (custom->raw_moments[k - 1] <= 0.0)
        throw std::invalid_argument("custom jump law: even moments must be positive");
  }
}

double draw_jump(const JumpLaw& law, Rng& rng) {
  if (const auto* custom = std::get_if<CustomJumps>(&law)) return custom->sample(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

// E[Y^k] for k = 1..8.
double raw_moment(const JumpLaw& law, int k) {
  if (const auto* custom = std::get_if<CustomJumps>(&law)) return custom->raw_moments[k - 1];
  if (k % 2 == 1) return 0.0;
  double m = 1.0;  // (k-1)!!
  for (int j = k - 1; j > 1; j -= 2) m *= j;
  return m;
}

JumpPath simulate_compound_poisson(const CompoundPoisson& cp, Horizon h, Rng& rng) {
  std::poisson_distribution<long long> count_dist(cp.rate * h.length());
  const long long n = count_dist(rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> times(static_cast<std::size_t>(n));
  // end - len*U with U in [0,1) lands in (start, end].
  for (auto& t : times) t = h.end - h.length() * unif(rng);
  std::sort(times.begin(), times.end());
  std::vector<Mark> marks;
  marks.reserve(times.size());
  for (double t : times) {
    if (!marks.empty() && t <= marks.back().time) t = std::nextafter(marks.back().time, h.end);
    if (t > h.end) break;
    marks.push_back({t, draw_jump(cp.jumps, rng)});
  }
  return JumpPath(h, std::move(marks));
}

JumpPath simulate_variance_gamma(const VarianceGamma& vg, Horizon h, Rng& rng) {
  // Difference of two gamma processes with shape rate 1/nu and scale
  // sigma*sqrt(nu/2) each (theta = 0).
  const auto steps = static_cast<std::size_t>(std::ceil(h.length() / vg.grid_step - 1e-12));
  const double scale = vg.sigma * std::sqrt(vg.nu / 2.0);
  std::vector<Mark> marks;
  marks.reserve(steps);
  double prev = h.start;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = (k == steps) ? h.end : h.start + static_cast<double>(k) * vg.grid_step;
    const double dt = t - prev;
    std::gamma_distribution<double> gamma(dt / vg.nu, scale);
    const double up = gamma(rng);
    const double down = gamma(rng);
    const double size = up - down;
    if (size != 0.0) marks.push_back({t, size});
    prev = t;
  }
  return JumpPath(h, std::move(marks));
}

}  // namespace

LevyModel LevyModel::compound_poisson(double rate, JumpLaw jumps) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("compound Poisson: rate must be positive");
  validate_jumps(jumps);
  return LevyModel(CompoundPoisson{rate, std::move(jumps)});
}

LevyModel LevyModel::variance_gamma(double sigma, double nu, double theta, double grid_step) {
  if (!(sigma > 0.0)) throw std::invalid_argument("variance gamma: sigma must be positive");
  if (!(nu > 0.0)) throw std::invalid_argument("variance gamma: nu must be positive");
  if (theta != 0.0) throw std::invalid_argument("variance gamma: theta must be 0 (centred, symmetric driver)");
  if (!(grid_step > 0.0)) throw std::invalid_argument("variance gamma: grid_step must be positive");
  return LevyModel(VarianceGamma{sigma, nu, theta, grid_step});
}

JumpPath::JumpPath(Horizon horizon, std::vector<Mark> marks) : horizon_(horizon), marks_(std::move(marks)) {
  if (!(horizon_.end >= horizon_.start)) throw std::invalid_argument("JumpPath: horizon end precedes start");
  double prev = horizon_.start;
  for (const auto& m : marks_) {
    if (!(m.time > prev)) throw std::invalid_argument("JumpPath: mark times must be strictly increasing after start");
    if (m.time > horizon_.end) throw std::invalid_argument("JumpPath: mark beyond horizon end");
    prev = m.time;
  }
}

bool JumpPath::is_subordinator() const {
  return std::all_of(marks_.begin(), marks_.end(), [](const Mark& m) { return m.size > 0.0; });
}

double JumpPath::value_at(double t) const {
  double sum = 0.0;
  for (const auto& m : marks_) {
    if (m.time > t) break;
    sum += m.size;
  }
  return sum;
}

JumpPath JumpPath::restricted_from(double t0) const {
  auto first = std::upper_bound(marks_.begin(), marks_.end(), t0,
                                [](double t, const Mark& m) { return t < m.time; });
  return JumpPath(Horizon{t0, horizon_.end}, std::vector<Mark>(first, marks_.end()));
}

JumpPath simulate_levy_path(const LevyModel& model, Horizon horizon, std::uint64_t seed) {
  if (!(horizon.length() > 0.0)) throw std::invalid_argument("simulate_levy_path: horizon must have positive length");
  Rng rng = make_rng(seed);
  return std::visit(
      [&](const auto& v) -> JumpPath {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CompoundPoisson>)
          return simulate_compound_poisson(v, horizon, rng);
        else
          return simulate_variance_gamma(v, horizon, rng);
      },
      model.variant());
}

JumpPath squared_jumps(const JumpPath& path) {
  std::vector<Mark> marks;
  marks.reserve(path.size());
  // A square that underflows to zero carries no S mass.
  for (const auto& m : path.marks())
    if (const double sq = m.size * m.size; sq > 0.0) marks.push_back({m.time, sq});
  return JumpPath(path.horizon(), std::move(marks));
}

SMoments s_moments(const LevyModel& model) {
  return std::visit(
      [](const auto& v) -> SMoments {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return {v.rate * raw_moment(v.jumps, 2), v.rate * raw_moment(v.jumps, 4)};
        } else {
          const double s2 = v.sigma * v.sigma;
          return {s2, 3.0 * v.nu * s2 * s2};
        }
      },
      model.variant());
}

LMoments l_moments(const LevyModel& model) {
  return std::visit(
      [](const auto& v) -> LMoments {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CompoundPoisson>) {
          // Cumulants of a compound Poisson law are rate * raw jump moments.
          const double k2 = v.rate * raw_moment(v.jumps, 2);
          const double k4 = v.rate * raw_moment(v.jumps, 4);
          return {k2, k4 + 3.0 * k2 * k2, v.rate * raw_moment(v.jumps, 3)};
        } else {
          const double s4 = v.sigma * v.sigma * v.sigma * v.sigma;
          return {v.sigma * v.sigma, 3.0 * v.nu * s4 + 3.0 * s4, 0.0};
        }
      },
      model.variant());
}

void write_csv(std::ostream& out, const JumpPath& path) {
  const auto old_precision = out.precision(17);
  out << "time,size\n";
  for (const auto& m : path.marks()) out << m.time << ',' << m.size << '\n';
  out.precision(old_precision);
}

}  // namespace supcogarch
