#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "supcogarch/rng.hpp"

namespace supcogarch {

// Jump law N(0, 1).
struct StandardNormalJumps {};

// User-supplied jump law. Raw moments E[Y^k] for k = 1..8 are mandatory; a
// density is optional and enables quadrature at non-integer exponents.
struct CustomJumps {
  std::function<double(Rng&)> sample;
  std::vector<double> raw_moments;        // raw_moments[k-1] = E[Y^k]
  std::function<double(double)> density;  // may be empty
};

using JumpLaw = std::variant<StandardNormalJumps, CustomJumps>;

struct CompoundPoisson {
  double rate = 1.0;
  JumpLaw jumps = StandardNormalJumps{};
};

// Brownian motion time-changed by a gamma subordinator with unit mean rate and
// variance rate `nu`. Simulated as a difference of gamma increments on a
// uniform grid of width `grid_step`.
struct VarianceGamma {
  double sigma = 1.0;
  double nu = 1.0;
  double theta = 0.0;
  double grid_step = 1.0 / 256.0;
};

// Pure-jump driving Lévy process L with E[L_1] = 0 and no Gaussian part.
class LevyModel {
 public:
  using Variant = std::variant<CompoundPoisson, VarianceGamma>;

  static LevyModel compound_poisson(double rate, JumpLaw jumps = StandardNormalJumps{});
  static LevyModel variance_gamma(double sigma, double nu, double theta = 0.0,
                                  double grid_step = 1.0 / 256.0);

  const Variant& variant() const { return variant_; }
  bool is_compound_poisson() const { return std::holds_alternative<CompoundPoisson>(variant_); }
  bool is_variance_gamma() const { return std::holds_alternative<VarianceGamma>(variant_); }

  // σ_L²; both supported variants are pure jump.
  double gaussian_variance() const { return 0.0; }

 private:
  explicit LevyModel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

struct Horizon {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

struct Mark {
  double time;
  double size;
};

// Time-sorted jump marks on (start, end].
class JumpPath {
 public:
  JumpPath() = default;
  JumpPath(Horizon horizon, std::vector<Mark> marks);

  const Horizon& horizon() const { return horizon_; }
  std::span<const Mark> marks() const { return marks_; }
  std::size_t size() const { return marks_.size(); }
  bool empty() const { return marks_.empty(); }

  // True when every size is strictly positive (a subordinator path).
  bool is_subordinator() const;

  // Sum of sizes over (start, t].
  double value_at(double t) const;

  // Marks on (t0, horizon.end], with horizon start moved to t0.
  JumpPath restricted_from(double t0) const;

 private:
  Horizon horizon_;
  std::vector<Mark> marks_;
};

JumpPath simulate_levy_path(const LevyModel& model, Horizon horizon, std::uint64_t seed);

// S = [L, L]^d on the same marks: sizes squared. Marks whose square underflows
// to zero are dropped.
JumpPath squared_jumps(const JumpPath& path);

struct SMoments {
  double m1;  // E[S_1] = ∫ y² ν_L(dy)
  double m2;  // Var[S_1] = ∫ y⁴ ν_L(dy)
};

struct LMoments {
  double e2;                  // E[L_1²]
  double e4;                  // E[L_1⁴]
  double third_levy_moment;   // ∫ y³ ν_L(dy)
};

SMoments s_moments(const LevyModel& model);
LMoments l_moments(const LevyModel& model);

// Header `time,size`, 17 significant digits.
void write_csv(std::ostream& out, const JumpPath& path);

}  // namespace supcogarch
