#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "supcogarch/charexp.hpp"
#include "supcogarch/cogarch.hpp"
#include "supcogarch/levy.hpp"

namespace supcogarch {

struct Atom {
  double phi;
  double weight;
};

// Finitely supported superposition measure π = Σ p_i δ_{φ_i}. Atoms are kept
// sorted by φ ascending; weights are positive and sum to 1 within 1e-12.
class Mixture {
 public:
  explicit Mixture(std::vector<Atom> atoms);
  static Mixture dirac(double phi);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  double phi_bar() const { return atoms_.back().phi; }
  // Smallest positive atom; 0 when π = δ_0.
  double phi_under() const;

 private:
  std::vector<Atom> atoms_;
};

enum class SupVariant { Sup1, Sup2, Sup3 };

std::string_view to_string(SupVariant v);
std::optional<SupVariant> parse_variant(std::string_view name);

struct SupModel {
  Mixture mixture;
  double beta;
  double eta;
  LevyModel levy;
};

// A φ drawn from π at one S-mark (supCOGARCH 3 only).
struct ChosenMark {
  double time;
  double phi;
  std::size_t atom;
};

struct SupPathBundle {
  SupVariant variant;
  Mixture mixture;
  Horizon horizon;
  PathRecord aggregate;
  std::vector<PathRecord> components;  // one per atom, same order as mixture
  // L-paths on the horizon: one per atom for Sup1, a single shared one otherwise.
  std::vector<JumpPath> drivers;
  std::vector<ChosenMark> chosen_marks;
};

struct SupSimOptions {
  std::optional<double> burn_in;
  // When false the bundle starts at the stationary means at horizon.start.
  bool stationary_start = true;
};

// 40·max(1/η, 1/|Ψ(1,φ̄)|) when Ψ(1,φ̄) < 0, else 40/η.
double default_sup_burn_in(const SupModel& model);

// Validates the model once (atoms inside [0, φ_max)) and then simulates any
// number of bundles. Every bundle is a pure function of (horizon, seed).
class SupSimulator {
 public:
  SupSimulator(SupVariant variant, SupModel model, SupSimOptions options = {});

  SupVariant variant() const { return variant_; }
  const SupModel& model() const { return model_; }
  double burn_in() const { return burn_in_; }
  // Component starting values before burn-in: nondecreasing in φ.
  std::span<const double> component_starts() const { return starts_; }

  SupPathBundle simulate(Horizon horizon, std::uint64_t seed) const;

 private:
  SupPathBundle simulate_independent(Horizon full, std::uint64_t seed) const;
  SupPathBundle simulate_shared(Horizon full, std::uint64_t seed) const;

  SupVariant variant_;
  SupModel model_;
  SupSimOptions options_;
  double burn_in_;
  std::vector<double> starts_;
  double aggregate_start_;
};

SupPathBundle simulate_sup1(const SupModel& model, Horizon horizon, std::uint64_t seed, SupSimOptions options = {});
SupPathBundle simulate_sup2(const SupModel& model, Horizon horizon, std::uint64_t seed, SupSimOptions options = {});
SupPathBundle simulate_sup3(const SupModel& model, Horizon horizon, std::uint64_t seed, SupSimOptions options = {});

// `time,aggregate,phi_<i>...` at the union of event times and, when given,
// a uniform grid. Values are right-continuous.
void write_bundle_csv(std::ostream& out, const SupPathBundle& bundle, std::optional<double> grid_step = std::nullopt);
// `time,phi`.
void write_chosen_csv(std::ostream& out, const SupPathBundle& bundle);

// Analytic stationary moments. Throw MomentDiverges outside the moment region.
double sup1_mean(const SupModel& m);
double sup1_variance(const SupModel& m);
double sup1_acov(const SupModel& m, double h);

double sup2_mean(const SupModel& m);
double sup2_second_moment(const SupModel& m);
double sup2_variance(const SupModel& m);
double sup2_acov(const SupModel& m, double h);

double sup3_mean(const SupModel& m);
double sup3_second_moment(const SupModel& m);
double sup3_variance(const SupModel& m);
double sup3_acov(const SupModel& m, double h);

double sup_mean(SupVariant v, const SupModel& m);
double sup_variance(SupVariant v, const SupModel& m);
double sup_acov(SupVariant v, const SupModel& m, double h);

// Cov[V^φ_0, V̄_0] for the given variant; Sup1 pairs only with the own atom.
double component_aggregate_cov(SupVariant v, const SupModel& m, std::size_t atom);

enum class LimitKind { PositiveConstant, Zero, Bounded };

struct TailExponent {
  double kappa_bar;
  LimitKind limit_kind;
};

std::string_view to_string(LimitKind k);

// κ̄ solves Ψ(κ̄, φ̄) = 0. Throws NoRoot when φ̄ is 0 or not below φ_max.
TailExponent tail_exponent(SupVariant v, const Mixture& pi, const ExponentContext& ctx);

inline constexpr std::array<double, 3> kReportedMomentOrders{0.5, 1.0, 2.0};

struct AtomStationarity {
  std::size_t atom;
  double phi;
  double log_moment;
  bool admissible;  // log_moment < η
  std::array<bool, 3> in_moment_region;  // Ψ(κ, φ) < 0 for κ in kReportedMomentOrders
};

struct StationarityReport {
  SupVariant variant;
  double phi_max;
  std::vector<AtomStationarity> atoms;
  std::vector<std::size_t> violations;
  bool stationary;
  std::string summary;
};

StationarityReport check_stationarity(SupVariant v, const Mixture& pi, const ExponentContext& ctx);

}  // namespace supcogarch
