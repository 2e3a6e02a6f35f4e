#include "supcogarch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "supcogarch/errors.hpp"

namespace supcogarch {

namespace {

constexpr double kExactMatchRelTolerance = 1e-12;

std::vector<double> centred(std::span<const double> x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> out(x.begin(), x.end());
  for (auto& v : out) v -= mean;
  return out;
}

void write_optional(std::ostream& out, const std::optional<double>& v, const char* absent) {
  if (v)
    out << *v;
  else
    out << absent;
}

void write_verdict(std::ostream& out, const std::optional<bool>& pass) {
  out << (pass ? (*pass ? "true" : "false") : "undefined");
}

}  // namespace

Estimate jackknife(std::span<const std::vector<double>> columns,
                   const std::function<double(std::span<const double>)>& statistic) {
  if (columns.empty()) throw std::invalid_argument("jackknife: no columns");
  const std::size_t n = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw std::invalid_argument("jackknife: columns differ in length");
  if (n < 2) throw InsufficientSample("jackknife: at least two observations are required");

  const std::size_t m = columns.size();
  std::vector<double> sums(m);
  for (std::size_t j = 0; j < m; ++j) sums[j] = std::accumulate(columns[j].begin(), columns[j].end(), 0.0);
  std::vector<double> means(m);
  for (std::size_t j = 0; j < m; ++j) means[j] = sums[j] / static_cast<double>(n);
  const double full = statistic(means);

  std::vector<double> loo(n);
  std::vector<double> partial(m);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) partial[j] = (sums[j] - columns[j][i]) / denom;
    loo[i] = statistic(partial);
  }
  const double loo_mean = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  return {full, std::sqrt(denom / static_cast<double>(n) * ss), n};
}

Estimate estimate_mean(std::span<const double> x) {
  std::vector<std::vector<double>> cols{std::vector<double>(x.begin(), x.end())};
  return jackknife(cols, [](std::span<const double> m) { return m[0]; });
}

Estimate estimate_second_moment(std::span<const double> x) {
  std::vector<double> sq(x.begin(), x.end());
  for (auto& v : sq) v *= v;
  return estimate_mean(sq);
}

Estimate estimate_variance(std::span<const double> x) {
  const auto c = centred(x);
  std::vector<double> sq(c);
  for (auto& v : sq) v *= v;
  std::vector<std::vector<double>> cols{c, sq};
  return jackknife(cols, [](std::span<const double> m) { return m[1] - m[0] * m[0]; });
}

Estimate estimate_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("estimate_covariance: samples differ in length");
  const auto cx = centred(x);
  const auto cy = centred(y);
  std::vector<double> prod(cx.size());
  for (std::size_t i = 0; i < cx.size(); ++i) prod[i] = cx[i] * cy[i];
  std::vector<std::vector<double>> cols{cx, cy, prod};
  return jackknife(cols, [](std::span<const double> m) { return m[2] - m[0] * m[1]; });
}

MomentReport make_report(std::string name, const std::function<double()>& analytic, const Estimate& est, double k,
                         std::string note) {
  MomentReport r{std::move(name), std::nullopt, est.value, est.std_error, est.n, k, std::nullopt, std::move(note)};
  try {
    r.analytic = analytic();
  } catch (const MomentDiverges&) {
    if (!r.note.empty()) r.note += "; ";
    r.note += "analytic value diverges";
    return r;
  }
  const double diff = std::abs(r.estimate - *r.analytic);
  if (r.std_error == 0.0)
    r.pass = diff <= kExactMatchRelTolerance * std::max(1.0, std::abs(*r.analytic));
  else
    r.pass = diff < k * r.std_error;
  return r;
}

std::vector<MomentReport> estimate_moments(const SampleTable& samples, const std::vector<MomentTarget>& targets,
                                           double k) {
  auto column = [&](const std::string& name) -> const std::vector<double>& {
    auto it = samples.find(name);
    if (it == samples.end()) throw std::invalid_argument("estimate_moments: unknown column '" + name + "'");
    if (it->second.size() < kMinimumSample)
      throw InsufficientSample("estimate_moments: column '" + name + "' has fewer than 100 samples");
    return it->second;
  };
  std::vector<MomentReport> reports;
  for (const auto& t : targets) {
    const auto& x = column(t.column);
    Estimate est{};
    switch (t.statistic) {
      case Statistic::Mean: est = estimate_mean(x); break;
      case Statistic::SecondMoment: est = estimate_second_moment(x); break;
      case Statistic::Variance: est = estimate_variance(x); break;
      case Statistic::Covariance: est = estimate_covariance(x, column(t.other_column)); break;
    }
    reports.push_back(make_report(t.name, t.analytic, est, t.k.value_or(k), t.note));
  }
  return reports;
}

double hill_estimator(std::span<const double> samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k == 0 || !(2 * k < n)) throw std::invalid_argument("hill_estimator: need 0 < k < n/2");
  std::vector<double> x(samples.begin(), samples.end());
  for (double v : x)
    if (!(v > 0.0)) throw std::invalid_argument("hill_estimator: samples must be positive");
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end(), std::greater<>());
  const double threshold = x[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(x[i] / threshold);
  if (!(sum > 0.0)) throw std::domain_error("hill_estimator: top order statistics are all equal");
  return static_cast<double>(k) / sum;
}

std::size_t default_hill_k(std::size_t n) {
  return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 0.6)));
}

std::vector<HillPoint> hill_sweep(std::span<const double> samples) {
  std::vector<HillPoint> out;
  const double n = static_cast<double>(samples.size());
  for (int step = 0; step <= 6; ++step) {
    const double e = 0.40 + 0.05 * step;
    const auto k = static_cast<std::size_t>(std::llround(std::pow(n, e)));
    if (k == 0 || 2 * k >= samples.size()) continue;
    out.push_back({k, hill_estimator(samples, k)});
  }
  return out;
}

KernelCheck sup3_kernel_check(const SupModel& m, double r, double h, std::span<const double> sq0,
                              std::span<const double> vbar_r, const std::vector<std::vector<double>>& components_r,
                              std::span<const double> sq_h) {
  const std::size_t atoms = m.mixture.size();
  if (components_r.size() != atoms) throw std::invalid_argument("sup3_kernel_check: one column per atom is required");
  // Columns: a, b, c_0..c_{m-1}, d, then a·b, a·c_i, a·d.
  std::vector<std::vector<double>> cols;
  cols.emplace_back(sq0.begin(), sq0.end());
  cols.emplace_back(vbar_r.begin(), vbar_r.end());
  for (const auto& c : components_r) cols.push_back(c);
  cols.emplace_back(sq_h.begin(), sq_h.end());
  const std::size_t base = cols.size();
  for (std::size_t j = 1; j < base; ++j) {
    if (cols[j].size() != cols[0].size()) throw std::invalid_argument("sup3_kernel_check: columns differ in length");
    std::vector<double> prod(cols[0].size());
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = cols[0][k] * cols[j][k];
    cols.push_back(std::move(prod));
  }
  auto cov = [base](std::span<const double> mu, std::size_t j) { return mu[base + j - 1] - mu[0] * mu[j]; };
  auto predicted = [&](std::span<const double> mu) {
    Sup3InnerCovariances inner{cov(mu, 1), {}};
    for (std::size_t i = 0; i < atoms; ++i) inner.per_atom.push_back(cov(mu, 2 + i));
    return sq_increment_cov_sup3(m, r, h, inner);
  };
  const std::size_t d = 2 + atoms;
  auto direct = [&](std::span<const double> mu) { return cov(mu, d); };
  return {jackknife(cols, predicted), jackknife(cols, direct),
          jackknife(cols, [&](std::span<const double> mu) { return predicted(mu) - direct(mu); })};
}

QExtraction extract_q(const SupPathBundle& bundle, const PricePath& price) {
  QExtraction out;
  const auto vol = bundle.aggregate.events();
  const auto jumps = price.jumps();
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < vol.size() || b < jumps.size()) {
    const double tv = a < vol.size() ? vol[a].time : std::numeric_limits<double>::infinity();
    const double tp = b < jumps.size() ? jumps[b].time : std::numeric_limits<double>::infinity();
    const double t = std::min(tv, tp);
    const bool vol_jump = tv == t && vol[a].jump > 0.0;
    const double sq = tp == t ? jumps[b].increment * jumps[b].increment : 0.0;
    const bool price_jump = sq > 0.0;
    if (vol_jump && price_jump) {
      ++out.common_jumps;
      QSample s{bundle.variant, t, vol[a].jump / sq, std::nullopt};
      if (bundle.variant == SupVariant::Sup3) {
        auto it = std::lower_bound(bundle.chosen_marks.begin(), bundle.chosen_marks.end(), t,
                                   [](const ChosenMark& c, double x) { return c.time < x; });
        if (it != bundle.chosen_marks.end() && it->time == t) s.chosen_phi = it->phi;
      }
      out.samples.push_back(s);
    } else if (vol_jump) {
      ++out.volatility_only_jumps;
    } else if (price_jump) {
      ++out.price_only_jumps;
    }
    if (tv == t) ++a;
    if (tp == t) ++b;
  }
  return out;
}

QBoundsReport check_q_bounds(std::span<const QSample> samples, const Mixture& pi) {
  QBoundsReport report;
  const double upper = pi.phi_bar();
  const double lower = pi.phi_under();
  const double tol = kQBoundRelTolerance;
  for (const auto& s : samples) {
    ++report.checked;
    switch (s.variant) {
      case SupVariant::Sup1:
        if (s.q > upper * (1.0 + tol)) report.violations.push_back({s.jump_time, s.q, "q <= phi_bar"});
        break;
      case SupVariant::Sup2:
        if (s.q > upper * (1.0 + tol)) report.violations.push_back({s.jump_time, s.q, "q <= phi_bar"});
        if (s.q < lower * (1.0 - tol)) report.violations.push_back({s.jump_time, s.q, "q >= phi_under"});
        break;
      case SupVariant::Sup3:
        if (s.chosen_phi && *s.chosen_phi == upper && s.q < upper * (1.0 - tol))
          report.violations.push_back({s.jump_time, s.q, "q >= phi_bar when phi_bar is chosen"});
        if (s.chosen_phi && *s.chosen_phi == lower && s.q > lower * (1.0 + tol))
          report.violations.push_back({s.jump_time, s.q, "q <= phi_under when phi_under is chosen"});
        break;
    }
  }
  return report;
}

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw std::invalid_argument("histogram: no values");
  if (bins == 0) throw std::invalid_argument("histogram: at least one bin is required");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("histogram: values must be finite");
  if (lo == hi) return {{lo, hi, values.size()}};
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t i = 0; i < bins; ++i)
    out[i] = {lo + width * static_cast<double>(i), i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1), 0};
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    ++out[std::min(idx, bins - 1)].count;
  }
  return out;
}

void write_reports_csv(std::ostream& out, std::span<const MomentReport> reports) {
  const auto old_precision = out.precision(17);
  out << "name,analytic,estimate,std_error,n,k,pass,note\n";
  for (const auto& r : reports) {
    out << r.name << ',';
    write_optional(out, r.analytic, "diverges");
    out << ',' << r.estimate << ',' << r.std_error << ',' << r.n << ',' << r.k << ',';
    write_verdict(out, r.pass);
    out << ',' << r.note << '\n';
  }
  out.precision(old_precision);
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBin> bins) {
  const auto old_precision = out.precision(17);
  out << "bin_left,bin_right,count\n";
  for (const auto& b : bins) out << b.left << ',' << b.right << ',' << b.count << '\n';
  out.precision(old_precision);
}

void write_q_csv(std::ostream& out, std::span<const QSample> samples) {
  const auto old_precision = out.precision(17);
  out << "variant,time,q,chosen_phi\n";
  for (const auto& s : samples) {
    out << to_string(s.variant) << ',' << s.jump_time << ',' << s.q << ',';
    write_optional(out, s.chosen_phi, "");
    out << '\n';
  }
  out.precision(old_precision);
}

void write_increment_stats_csv(std::ostream& out, std::span<const IncrementStat> stats) {
  const auto old_precision = out.precision(17);
  out << "r,h,stat,analytic,mc,se,pass\n";
  for (const auto& s : stats) {
    out << s.r << ',' << s.h << ',' << s.stat << ',';
    write_optional(out, s.analytic, "diverges");
    out << ',' << s.mc << ',' << s.se << ',';
    write_verdict(out, s.pass);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_hill_csv(std::ostream& out, std::span<const HillPoint> sweep) {
  const auto old_precision = out.precision(17);
  out << "k,alpha\n";
  for (const auto& p : sweep) out << p.k << ',' << p.alpha << '\n';
  out.precision(old_precision);
}

}  // namespace supcogarch
