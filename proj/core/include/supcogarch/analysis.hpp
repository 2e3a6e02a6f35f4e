#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supcogarch/price.hpp"
#include "supcogarch/supcogarch.hpp"

namespace supcogarch {

struct Estimate {
  double value;
  double std_error;
  std::size_t n;
};

// Delete-one jackknife for a statistic that is a smooth function of column
// means. All columns must have the same length n ≥ 2.
Estimate jackknife(std::span<const std::vector<double>> columns,
                   const std::function<double(std::span<const double>)>& statistic);

Estimate estimate_mean(std::span<const double> x);
Estimate estimate_second_moment(std::span<const double> x);
Estimate estimate_variance(std::span<const double> x);
Estimate estimate_covariance(std::span<const double> x, std::span<const double> y);

inline constexpr double kDefaultTolerance = 4.0;
inline constexpr std::size_t kMinimumSample = 100;

struct MomentReport {
  std::string name;
  std::optional<double> analytic;  // empty when the analytic value diverges
  double estimate;
  double std_error;
  std::size_t n;
  double k;
  std::optional<bool> pass;  // |estimate - analytic| < k·std_error; empty when analytic diverges
  std::string note;
};

// Pairs an estimate with an analytic target. `analytic` may throw
// MomentDiverges; the report then carries no analytic value and no verdict.
// A zero standard error is an exact-match comparison.
MomentReport make_report(std::string name, const std::function<double()>& analytic, const Estimate& est,
                         double k = kDefaultTolerance, std::string note = {});

enum class Statistic { Mean, SecondMoment, Variance, Covariance };

struct MomentTarget {
  std::string name;
  Statistic statistic;
  std::string column;
  std::string other_column;  // Covariance only
  std::function<double()> analytic;
  std::optional<double> k;   // overrides the default multiplier
  std::string note;
};

using SampleTable = std::map<std::string, std::vector<double>>;

// Throws InsufficientSample when a referenced column has fewer than 100 rows.
std::vector<MomentReport> estimate_moments(const SampleTable& samples, const std::vector<MomentTarget>& targets,
                                           double k = kDefaultTolerance);

// Hill estimate of the tail index from the k largest of the positive samples.
double hill_estimator(std::span<const double> samples, std::size_t k);
std::size_t default_hill_k(std::size_t n);

struct HillPoint {
  std::size_t k;
  double alpha;
};

// k = round(n^e) for e = 0.40, 0.45, ..., 0.70.
std::vector<HillPoint> hill_sweep(std::span<const double> samples);

struct QSample {
  SupVariant variant;
  double jump_time;
  double q;
  std::optional<double> chosen_phi;
};

struct QExtraction {
  std::vector<QSample> samples;
  std::size_t common_jumps = 0;
  std::size_t volatility_only_jumps = 0;
  std::size_t price_only_jumps = 0;
};

// q = ΔV̄ / (ΔG)² at every common jump of aggregate volatility and price.
QExtraction extract_q(const SupPathBundle& bundle, const PricePath& price);

struct QViolation {
  double time;
  double q;
  std::string bound;
};

struct QBoundsReport {
  std::size_t checked = 0;
  std::vector<QViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr double kQBoundRelTolerance = 1e-12;

QBoundsReport check_q_bounds(std::span<const QSample> samples, const Mixture& pi);

struct HistogramBin {
  double left;
  double right;
  std::size_t count;
};

// Equal-width bins over [min, max]; a single bin when all values coincide.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins);

// Cross-lag check of the supCOGARCH 3 kernel: inner covariances estimated
// from the same replications predict Cov[(Δ^rG_0)², (Δ^rG_h)²]. Standard
// errors come from one joint jackknife, so `difference` accounts for the
// correlation between prediction and direct estimate.
struct KernelCheck {
  Estimate predicted;
  Estimate direct;
  Estimate difference;  // predicted - direct
};

// sq0 = (Δ^rG_0)², vbar_r = V̄_r, components_r[i] = V^{φ_i}_r, sq_h = (Δ^rG_h)².
KernelCheck sup3_kernel_check(const SupModel& m, double r, double h, std::span<const double> sq0,
                              std::span<const double> vbar_r, const std::vector<std::vector<double>>& components_r,
                              std::span<const double> sq_h);

struct IncrementStat {
  double r;
  double h;
  std::string stat;
  std::optional<double> analytic;
  double mc;
  double se;
  std::optional<bool> pass;
};

void write_reports_csv(std::ostream& out, std::span<const MomentReport> reports);
void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins);
void write_q_csv(std::ostream& out, std::span<const QSample> samples);
void write_increment_stats_csv(std::ostream& out, std::span<const IncrementStat> stats);
void write_hill_csv(std::ostream& out, std::span<const HillPoint> sweep);

}  // namespace supcogarch
