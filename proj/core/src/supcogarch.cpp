#include "supcogarch/supcogarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "supcogarch/errors.hpp"

namespace supcogarch {

namespace {

constexpr double kWeightSumTolerance = 1e-12;
constexpr double kBurnInRelaxationTimes = 40.0;

CogarchParams atom_params(const SupModel& m, std::size_t i) { return {m.beta, m.eta, m.mixture[i].phi}; }

double psi1(const SupModel& m, double phi) { return phi * s_moments(m.levy).m1 - m.eta; }

// Aggregate Σ p_i V^{φ_i} of components on a common horizon, with one event
// per distinct component event time.
PathRecord weighted_aggregate(const std::vector<PathRecord>& components, const Mixture& pi) {
  struct Ref {
    double time;
    std::size_t comp;
    std::size_t event;
  };
  std::vector<Ref> refs;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto events = components[i].events();
    for (std::size_t k = 0; k < events.size(); ++k) refs.push_back({events[k].time, i, k});
  }
  std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return a.time < b.time; });

  double v0 = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) v0 += pi[i].weight * components[i].v0();

  std::vector<PathEvent> events;
  for (std::size_t a = 0; a < refs.size();) {
    const double t = refs[a].time;
    double jump = 0.0;
    std::size_t b = a;
    for (; b < refs.size() && refs[b].time == t; ++b)
      jump += pi[refs[b].comp].weight * components[refs[b].comp].events()[refs[b].event].jump;
    double left = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) left += pi[i].weight * components[i].left_limit_at(t);
    events.push_back({t, left, left + jump, jump});
    a = b;
  }
  const auto& first = components.front();
  return PathRecord(first.horizon(), v0, first.beta(), first.eta(), std::move(events));
}

void check_atoms_stationary(const SupModel& m) {
  const ExponentContext ctx(m.levy, m.eta);
  for (std::size_t i = m.mixture.size(); i-- > 0;) {
    const double phi = m.mixture[i].phi;
    if (phi == 0.0) break;
    if (!(log_moment(ctx, phi) < m.eta)) {
      std::ostringstream msg;
      msg << "atom " << i << " (phi = " << phi << ") lies outside the stationary region [0, phi_max)";
      throw NonStationary(msg.str(), i);
    }
  }
}

}  // namespace

Mixture::Mixture(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("mixture: at least one atom is required");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.phi >= 0.0) || !std::isfinite(a.phi)) throw std::invalid_argument("mixture: phi must be nonnegative");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw std::invalid_argument("mixture: weights must be positive");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) throw std::invalid_argument("mixture: weights must sum to 1");
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.phi < b.phi; });
  for (std::size_t i = 1; i < atoms_.size(); ++i)
    if (atoms_[i].phi == atoms_[i - 1].phi) throw std::invalid_argument("mixture: atoms must be distinct");
}

Mixture Mixture::dirac(double phi) { return Mixture({{phi, 1.0}}); }

double Mixture::phi_under() const {
  for (const auto& a : atoms_)
    if (a.phi > 0.0) return a.phi;
  return 0.0;
}

std::string_view to_string(SupVariant v) {
  switch (v) {
    case SupVariant::Sup1: return "sup1";
    case SupVariant::Sup2: return "sup2";
    case SupVariant::Sup3: return "sup3";
  }
  return "unknown";
}

std::optional<SupVariant> parse_variant(std::string_view name) {
  if (name == "sup1" || name == "Sup1") return SupVariant::Sup1;
  if (name == "sup2" || name == "Sup2") return SupVariant::Sup2;
  if (name == "sup3" || name == "Sup3") return SupVariant::Sup3;
  return std::nullopt;
}

std::string_view to_string(LimitKind k) {
  switch (k) {
    case LimitKind::PositiveConstant: return "positive_constant";
    case LimitKind::Zero: return "zero";
    case LimitKind::Bounded: return "bounded";
  }
  return "unknown";
}

double default_sup_burn_in(const SupModel& m) {
  const double rate = psi1(m, m.mixture.phi_bar());
  if (!(rate < 0.0)) return kBurnInRelaxationTimes / m.eta;
  return kBurnInRelaxationTimes * std::max(1.0 / m.eta, 1.0 / -rate);
}

SupSimulator::SupSimulator(SupVariant variant, SupModel model, SupSimOptions options)
    : variant_(variant), model_(std::move(model)), options_(options), burn_in_(0.0), aggregate_start_(0.0) {
  for (std::size_t i = 0; i < model_.mixture.size(); ++i) validate(atom_params(model_, i));
  check_atoms_stationary(model_);
  if (options_.burn_in && !(*options_.burn_in >= 0.0)) throw std::invalid_argument("burn-in must be nonnegative");
  burn_in_ = options_.burn_in.value_or(default_sup_burn_in(model_));

  const double level = model_.beta / model_.eta;
  bool all_means_finite = true;
  for (std::size_t i = 0; i < model_.mixture.size(); ++i) {
    double start = level;
    if (psi1(model_, model_.mixture[i].phi) < 0.0)
      start = stationary_mean(atom_params(model_, i), model_.levy);
    else
      all_means_finite = false;
    // Nondecreasing in φ so that the shared-driver ordering holds from t = 0.
    if (!starts_.empty()) start = std::max(start, starts_.back());
    starts_.push_back(start);
  }
  aggregate_start_ = all_means_finite ? sup3_mean(model_) : level;
  aggregate_start_ = std::clamp(aggregate_start_, starts_.front(), starts_.back());
}

SupPathBundle SupSimulator::simulate(Horizon horizon, std::uint64_t seed) const {
  if (!(horizon.length() > 0.0)) throw std::invalid_argument("simulate: horizon must have positive length");
  Horizon full = horizon;
  if (options_.stationary_start) full.start -= burn_in_;
  SupPathBundle bundle =
      variant_ == SupVariant::Sup1 ? simulate_independent(full, seed) : simulate_shared(full, seed);
  if (full.start < horizon.start) {
    const double t0 = horizon.start;
    bundle.aggregate = bundle.aggregate.restricted_from(t0);
    for (auto& c : bundle.components) c = c.restricted_from(t0);
    for (auto& d : bundle.drivers) d = d.restricted_from(t0);
    std::erase_if(bundle.chosen_marks, [t0](const ChosenMark& c) { return c.time <= t0; });
  }
  bundle.horizon = horizon;
  return bundle;
}

SupPathBundle SupSimulator::simulate_independent(Horizon full, std::uint64_t seed) const {
  const auto& pi = model_.mixture;
  SupPathBundle bundle{variant_, pi, full, {}, {}, {}, {}};
  for (std::size_t i = 0; i < pi.size(); ++i) {
    auto l_path = simulate_levy_path(model_.levy, full, derive_seed(seed, Stream::Driver, i));
    bundle.components.push_back(simulate_cogarch(atom_params(model_, i), squared_jumps(l_path), starts_[i]));
    bundle.drivers.push_back(std::move(l_path));
  }
  bundle.aggregate = weighted_aggregate(bundle.components, pi);
  return bundle;
}

SupPathBundle SupSimulator::simulate_shared(Horizon full, std::uint64_t seed) const {
  const auto& pi = model_.mixture;
  SupPathBundle bundle{variant_, pi, full, {}, {}, {}, {}};
  auto l_path = simulate_levy_path(model_.levy, full, derive_seed(seed, Stream::Driver, 0));
  const auto s_path = squared_jumps(l_path);
  for (std::size_t i = 0; i < pi.size(); ++i)
    bundle.components.push_back(simulate_cogarch(atom_params(model_, i), s_path, starts_[i]));
  bundle.drivers.push_back(std::move(l_path));

  if (variant_ == SupVariant::Sup2) {
    bundle.aggregate = weighted_aggregate(bundle.components, pi);
    return bundle;
  }

  std::vector<double> weights;
  for (const auto& a : pi.atoms()) weights.push_back(a.weight);
  std::discrete_distribution<std::size_t> choose(weights.begin(), weights.end());
  Rng rng = make_rng(derive_seed(seed, Stream::Choice));

  std::vector<PathEvent> events;
  events.reserve(s_path.size());
  bundle.chosen_marks.reserve(s_path.size());
  double v = aggregate_start_;
  double t = full.start;
  const auto marks = s_path.marks();
  for (std::size_t k = 0; k < marks.size(); ++k) {
    const std::size_t j = choose(rng);
    const double left = relax(v, model_.beta, model_.eta, marks[k].time - t);
    const double jump = bundle.components[j].events()[k].jump;
    v = left + jump;
    t = marks[k].time;
    events.push_back({t, left, v, jump});
    bundle.chosen_marks.push_back({t, pi[j].phi, j});
  }
  bundle.aggregate = PathRecord(full, aggregate_start_, model_.beta, model_.eta, std::move(events));
  return bundle;
}

SupPathBundle simulate_sup1(const SupModel& model, Horizon horizon, std::uint64_t seed, SupSimOptions options) {
  return SupSimulator(SupVariant::Sup1, model, options).simulate(horizon, seed);
}

SupPathBundle simulate_sup2(const SupModel& model, Horizon horizon, std::uint64_t seed, SupSimOptions options) {
  return SupSimulator(SupVariant::Sup2, model, options).simulate(horizon, seed);
}

SupPathBundle simulate_sup3(const SupModel& model, Horizon horizon, std::uint64_t seed, SupSimOptions options) {
  return SupSimulator(SupVariant::Sup3, model, options).simulate(horizon, seed);
}

void write_bundle_csv(std::ostream& out, const SupPathBundle& bundle, std::optional<double> grid_step) {
  if (grid_step && !(*grid_step > 0.0)) throw std::invalid_argument("write_bundle_csv: grid step must be positive");
  std::vector<double> times{bundle.horizon.start};
  for (const auto& e : bundle.aggregate.events()) times.push_back(e.time);
  for (const auto& c : bundle.components)
    for (const auto& e : c.events()) times.push_back(e.time);
  if (grid_step) {
    const auto steps = static_cast<std::size_t>(std::floor(bundle.horizon.length() / *grid_step + 1e-9));
    for (std::size_t k = 1; k <= steps; ++k) times.push_back(bundle.horizon.start + static_cast<double>(k) * *grid_step);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const auto old_precision = out.precision(17);
  out << "time,aggregate";
  for (const auto& a : bundle.mixture.atoms()) out << ",phi_" << a.phi;
  out << '\n';
  for (double t : times) {
    out << t << ',' << bundle.aggregate.value_at(t);
    for (const auto& c : bundle.components) out << ',' << c.value_at(t);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_chosen_csv(std::ostream& out, const SupPathBundle& bundle) {
  const auto old_precision = out.precision(17);
  out << "time,phi\n";
  for (const auto& c : bundle.chosen_marks) out << c.time << ',' << c.phi << '\n';
  out.precision(old_precision);
}

double sup1_mean(const SupModel& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    sum += m.mixture[i].weight * stationary_mean(atom_params(m, i), m.levy);
  return sum;
}

double sup1_variance(const SupModel& m) { return sup1_acov(m, 0.0); }

double sup1_acov(const SupModel& m, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i) {
    const double p = m.mixture[i].weight;
    sum += p * p * stationary_acov(atom_params(m, i), m.levy, h);
  }
  return sum;
}

double sup2_mean(const SupModel& m) { return sup1_mean(m); }

double sup2_second_moment(const SupModel& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    for (std::size_t j = 0; j < m.mixture.size(); ++j)
      sum += m.mixture[i].weight * m.mixture[j].weight * cross_moment(atom_params(m, i), m.mixture[j].phi, m.levy);
  return sum;
}

double sup2_variance(const SupModel& m) { return sup2_acov(m, 0.0); }

double sup2_acov(const SupModel& m, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    for (std::size_t j = 0; j < m.mixture.size(); ++j)
      sum += m.mixture[i].weight * m.mixture[j].weight * cross_acov(atom_params(m, i), m.mixture[j].phi, m.levy, h);
  return sum;
}

double sup3_mean(const SupModel& m) { return sup1_mean(m); }

namespace {

// (β/η)(Var[V^φ_i] - Cov[V^φ_i, V^φ_j]) / E[V^φ_i].
double sup3_correction(const SupModel& m, std::size_t i, std::size_t j) {
  const auto p = atom_params(m, i);
  const double var = stationary_variance_alt(p, m.levy);
  const double cov = cross_cov(p, m.mixture[j].phi, m.levy);
  return m.beta / m.eta * (var - cov) / stationary_mean(p, m.levy);
}

}  // namespace

double sup3_second_moment(const SupModel& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    for (std::size_t j = 0; j < m.mixture.size(); ++j)
      sum += m.mixture[i].weight * m.mixture[j].weight *
             (cross_moment(atom_params(m, i), m.mixture[j].phi, m.levy) + sup3_correction(m, i, j));
  return sum;
}

double sup3_variance(const SupModel& m) { return sup3_acov(m, 0.0); }

double sup3_acov(const SupModel& m, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("sup3_acov: lag must be nonnegative");
  const double decay = std::exp(-m.eta * h);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.mixture.size(); ++i)
    for (std::size_t j = 0; j < m.mixture.size(); ++j) {
      const auto p = atom_params(m, i);
      const double cov = std::exp(h * psi1(m, p.phi)) * cross_cov(p, m.mixture[j].phi, m.levy);
      sum += m.mixture[i].weight * m.mixture[j].weight * (cov + decay * sup3_correction(m, i, j));
    }
  return sum;
}

double sup_mean(SupVariant v, const SupModel& m) {
  switch (v) {
    case SupVariant::Sup1: return sup1_mean(m);
    case SupVariant::Sup2: return sup2_mean(m);
    case SupVariant::Sup3: return sup3_mean(m);
  }
  throw std::invalid_argument("unknown variant");
}

double sup_variance(SupVariant v, const SupModel& m) { return sup_acov(v, m, 0.0); }

double sup_acov(SupVariant v, const SupModel& m, double h) {
  switch (v) {
    case SupVariant::Sup1: return sup1_acov(m, h);
    case SupVariant::Sup2: return sup2_acov(m, h);
    case SupVariant::Sup3: return sup3_acov(m, h);
  }
  throw std::invalid_argument("unknown variant");
}

double component_aggregate_cov(SupVariant v, const SupModel& m, std::size_t atom) {
  if (atom >= m.mixture.size()) throw std::out_of_range("component_aggregate_cov: atom index out of range");
  const auto p = atom_params(m, atom);
  if (v == SupVariant::Sup1) return m.mixture[atom].weight * stationary_variance_alt(p, m.levy);
  double sum = 0.0;
  for (std::size_t j = 0; j < m.mixture.size(); ++j)
    sum += m.mixture[j].weight * cross_cov(p, m.mixture[j].phi, m.levy);
  return sum;
}

TailExponent tail_exponent(SupVariant v, const Mixture& pi, const ExponentContext& ctx) {
  const double kappa = kappa_of_phi(ctx, pi.phi_bar());
  // Finite support always puts positive mass on φ̄.
  return {kappa, v == SupVariant::Sup3 ? LimitKind::Bounded : LimitKind::PositiveConstant};
}

StationarityReport check_stationarity(SupVariant v, const Mixture& pi, const ExponentContext& ctx) {
  StationarityReport report{v, std::numeric_limits<double>::infinity(), {}, {}, true, {}};
  try {
    report.phi_max = phi_max(ctx);
  } catch (const NoRoot&) {
  }
  std::ostringstream summary;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double phi = pi[i].phi;
    AtomStationarity a{i, phi, log_moment(ctx, phi), false, {}};
    a.admissible = a.log_moment < ctx.eta();
    for (std::size_t k = 0; k < kReportedMomentOrders.size(); ++k)
      a.in_moment_region[k] = in_moment_region(ctx, kReportedMomentOrders[k], phi);
    if (!a.admissible) {
      report.violations.push_back(i);
      summary << "atom " << i << " (phi = " << phi << ") has log moment " << a.log_moment << " >= eta "
              << ctx.eta() << "; ";
    }
    report.atoms.push_back(a);
  }
  report.stationary = report.violations.empty();
  report.summary = report.stationary ? std::string("stationary") : "NonStationary: " + summary.str();
  return report;
}

}  // namespace supcogarch
