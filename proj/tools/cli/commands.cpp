#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <vector>

#include "supcogarch/analysis.hpp"
#include "supcogarch/charexp.hpp"
#include "supcogarch/cogarch.hpp"
#include "supcogarch/errors.hpp"
#include "supcogarch/montecarlo.hpp"
#include "supcogarch/parallel.hpp"
#include "supcogarch/price.hpp"
#include "supcogarch/rng.hpp"
#include "supcogarch/supcogarch.hpp"

namespace supcogarch::cli {

namespace fs = std::filesystem;

namespace {

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

// Opens `dir/name` for writing, calls body, then checks the stream.
void write_file(const fs::path& dir, const std::string& name, const std::function<void(std::ostream&)>& body) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  body(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string variant_name(SupVariant v) { return std::string(to_string(v)); }

// p·V solves the same equation with β scaled by p.
PathRecord scaled(const PathRecord& path, double p) {
  std::vector<PathEvent> events;
  events.reserve(path.events().size());
  for (const auto& e : path.events()) events.push_back({e.time, p * e.left_limit, p * e.post_jump, p * e.jump});
  return PathRecord(path.horizon(), p * path.v0(), p * path.beta(), path.eta(), std::move(events));
}

SupSimOptions sim_options(const ExperimentConfig& c) { return SupSimOptions{c.burn_in, c.stationary_start}; }

struct Row {
  std::string quantity;
  std::string variant;
  std::string arg;
  std::string value;
};

std::string evaluate(const std::function<double()>& f) {
  try {
    return fmt(f());
  } catch (const MomentDiverges&) {
    return "diverges";
  } catch (const DivergentIntegral&) {
    return "diverges";
  } catch (const NoRoot&) {
    return "none";
  } catch (const NonStationary&) {
    return "nonstationary";
  }
}

std::vector<double> squares(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v * v; });
  return out;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::size_t index_of(const std::vector<double>& xs, double x) {
  return static_cast<std::size_t>(std::find(xs.begin(), xs.end(), x) - xs.begin());
}

IncrementStat to_increment_stat(double r, double h, const MomentReport& rep) {
  return IncrementStat{r, h, rep.name, rep.analytic, rep.estimate, rep.std_error, rep.pass};
}

}  // namespace

int cmd_simulate(const ExperimentConfig& c, const RunOptions& opts) {
  validate(c);
  const SupModel model = make_model(c);
  ensure_dir(opts.out_dir);
  const Horizon horizon{0.0, c.horizon};
  const auto grid = c.output_grid_step;

  // Every variant uses the same root seed, so all shared drivers coincide.
  const auto shared = SupSimulator(SupVariant::Sup2, model, sim_options(c)).simulate(horizon, c.seed);
  write_file(opts.out_dir, "levy.csv", [&](std::ostream& o) { write_csv(o, shared.drivers.front()); });
  write_file(opts.out_dir, "cogarch.csv", [&](std::ostream& o) { write_csv(o, shared.components.back(), grid); });

  for (const SupVariant v : c.variants) {
    const auto bundle = SupSimulator(v, model, sim_options(c)).simulate(horizon, c.seed);
    const auto price = simulate_price(bundle, c.driver_atom);
    const std::string name = variant_name(v);
    write_file(opts.out_dir, name + "_aggregate.csv", [&](std::ostream& o) { write_csv(o, bundle.aggregate, grid); });
    for (std::size_t i = 0; i < bundle.components.size(); ++i) {
      const auto path = scaled(bundle.components[i], model.mixture[i].weight);
      write_file(opts.out_dir, name + "_component_" + std::to_string(i + 1) + ".csv",
                 [&](std::ostream& o) { write_csv(o, path, grid); });
    }
    write_file(opts.out_dir, name + "_bundle.csv", [&](std::ostream& o) { write_bundle_csv(o, bundle, grid); });
    write_file(opts.out_dir, name + "_price.csv", [&](std::ostream& o) { write_csv(o, price, grid); });
    if (v == SupVariant::Sup3)
      write_file(opts.out_dir, "sup3_chosen_phi.csv", [&](std::ostream& o) { write_chosen_csv(o, bundle); });
  }
  std::cout << "simulate: wrote " << c.variants.size() << " variant(s) to " << opts.out_dir.string() << '\n';
  return kSuccess;
}

int cmd_analytics(const ExperimentConfig& c, const RunOptions& opts) {
  validate(c);
  const SupModel m = make_model(c);
  const ExponentContext ctx(m.levy, m.eta);
  ensure_dir(opts.out_dir);

  std::vector<Row> rows;
  auto add = [&](std::string q, std::string v, std::string arg, const std::function<double()>& f) {
    rows.push_back({std::move(q), std::move(v), std::move(arg), evaluate(f)});
  };

  add("phi_max", "-", "", [&] { return phi_max(ctx); });
  add("phi_bar", "-", "", [&] { return m.mixture.phi_bar(); });
  add("phi_under", "-", "", [&] { return m.mixture.phi_under(); });
  if (m.mixture.phi_bar() == 0.0) add("constant_volatility", "-", "", [&] { return m.beta / m.eta; });
  for (const auto& atom : m.mixture.atoms()) {
    const std::string arg = "phi=" + fmt(atom.phi);
    const CogarchParams p{m.beta, m.eta, atom.phi};
    add("psi_1", "-", arg, [&] { return psi(ctx, 1.0, atom.phi); });
    add("psi_2", "-", arg, [&] { return psi(ctx, 2.0, atom.phi); });
    add("log_moment", "-", arg, [&] { return log_moment(ctx, atom.phi); });
    add("kappa", "-", arg, [&] { return kappa_of_phi(ctx, atom.phi); });
    add("component_mean", "-", arg, [&] { return stationary_mean(p, m.levy); });
    add("component_variance", "-", arg, [&] { return stationary_variance(p, m.levy); });
  }

  for (const SupVariant v : c.variants) {
    const std::string name = variant_name(v);
    const auto report = check_stationarity(v, m.mixture, ctx);
    add("stationary", name, "", [&] { return report.stationary ? 1.0 : 0.0; });
    add("kappa_bar", name, "", [&] { return tail_exponent(v, m.mixture, ctx).kappa_bar; });
    add("mean", name, "", [&] { return sup_mean(v, m); });
    if (v == SupVariant::Sup2) add("second_moment", name, "", [&] { return sup2_second_moment(m); });
    if (v == SupVariant::Sup3) add("second_moment", name, "", [&] { return sup3_second_moment(m); });
    add("variance", name, "", [&] { return sup_variance(v, m); });
    for (double h : c.lags) add("acov", name, "h=" + fmt(h), [&] { return sup_acov(v, m, h); });
    for (double r : c.increments) {
      const std::string ra = "r=" + fmt(r);
      add("increment_second_moment", name, ra,
          [&] { return increment_mean_and_variance(v, m, r).second_moment; });
      for (double h : c.lags) {
        if (h < r) continue;
        const std::string rh = ra + ";h=" + fmt(h);
        add("increment_autocov", name, rh, [&] { return increment_autocov(v, m, r, h); });
        if (m.mixture.phi_bar() == 0.0)
          rows.push_back({"sq_increment_cov", name, rh, "not_applicable"});
        else if (v == SupVariant::Sup3)
          rows.push_back({"sq_increment_cov", name, rh, "requires_inner_covariances"});
        else
          add("sq_increment_cov", name, rh, [&] { return sq_increment_cov_closed(v, m, r, h, c.driver_atom); });
      }
    }
  }

  write_file(opts.out_dir, "analytics.csv", [&](std::ostream& o) {
    o << "quantity,variant,arg,value\n";
    for (const auto& r : rows) o << r.quantity << ',' << r.variant << ',' << r.arg << ',' << r.value << '\n';
  });
  std::cout << "analytics: " << rows.size() << " rows\n";
  return kSuccess;
}

int cmd_verify(const ExperimentConfig& c, const RunOptions& opts) {
  validate(c);
  const SupModel m = make_model(c);
  ensure_dir(opts.out_dir);
  const double k1 = c.tolerance_k;
  const double k2 = c.tolerance_k_second_order;
  const double offset = c.target_offset;
  auto target = [&](std::function<double()> f) { return [f = std::move(f), offset] { return f() + offset; }; };

  std::vector<MomentReport> reports;
  std::vector<IncrementStat> stats;

  for (std::size_t ri = 0; ri < c.increments.size(); ++ri) {
    const double r = c.increments[ri];
    std::vector<double> lags_after;
    for (double h : c.lags)
      if (h >= r) lags_after.push_back(h);
    std::vector<double> vol_times{0.0, r};
    vol_times.insert(vol_times.end(), c.lags.begin(), c.lags.end());
    vol_times = sorted_unique(std::move(vol_times));
    std::vector<double> starts{0.0};
    starts.insert(starts.end(), lags_after.begin(), lags_after.end());
    starts = sorted_unique(std::move(starts));

    for (const SupVariant v : c.variants) {
      const std::string name = variant_name(v);
      const ReplicationSpec spec{v, vol_times, starts, r, c.driver_atom, c.burn_in};
      const auto sample = run_replications(m, spec, c.replications, derive_seed(c.seed, {ri}), opts.threads);

      if (ri == 0) {
        const auto& v0 = sample.aggregate[index_of(vol_times, 0.0)];
        reports.push_back(make_report(name + ".mean", target([&] { return sup_mean(v, m); }), estimate_mean(v0), k1));
        reports.push_back(
            make_report(name + ".variance", target([&] { return sup_variance(v, m); }), estimate_variance(v0), k2));
        for (double h : c.lags) {
          const auto& vh = sample.aggregate[index_of(vol_times, h)];
          reports.push_back(make_report(name + ".acov(h=" + fmt(h) + ")", target([&] { return sup_acov(v, m, h); }),
                                        estimate_covariance(v0, vh), k2));
        }
      }

      const auto& d0 = sample.increments[index_of(starts, 0.0)];
      const auto sq0 = squares(d0);
      stats.push_back(to_increment_stat(r, 0.0, make_report(name + ".mean", target([] { return 0.0; }),
                                                            estimate_mean(d0), k1)));
      stats.push_back(to_increment_stat(
          r, 0.0,
          make_report(name + ".second_moment", target([&] { return increment_mean_and_variance(v, m, r).second_moment; }),
                      estimate_second_moment(d0), k1)));
      for (double h : lags_after) {
        const auto& dh = sample.increments[index_of(starts, h)];
        const auto sqh = squares(dh);
        stats.push_back(to_increment_stat(r, h, make_report(name + ".autocov", target([&] { return increment_autocov(v, m, r, h); }),
                                                            estimate_covariance(d0, dh), k1)));
        // Constant volatility: squared increments are those of a scaled Lévy process.
        if (m.mixture.phi_bar() == 0.0) continue;
        if (v != SupVariant::Sup3) {
          stats.push_back(to_increment_stat(
              r, h,
              make_report(name + ".sq_cov", target([&] { return sq_increment_cov_closed(v, m, r, h, c.driver_atom); }),
                          estimate_covariance(sq0, sqh), k2)));
          continue;
        }
        std::vector<std::vector<double>> comps_r;
        for (const auto& comp : sample.components) comps_r.push_back(comp[index_of(vol_times, r)]);
        const auto check = sup3_kernel_check(m, r, h, sq0, sample.aggregate[index_of(vol_times, r)], comps_r, sqh);
        const double gap = check.difference.value + offset;
        const bool pass = check.difference.std_error > 0.0 ? std::abs(gap) < k2 * check.difference.std_error
                                                           : std::abs(gap) <= 1e-12 * std::abs(check.direct.value);
        stats.push_back({r, h, name + ".sq_cov_kernel", check.predicted.value + offset, check.direct.value,
                         check.difference.std_error, pass});
      }
    }
  }

  write_file(opts.out_dir, "verify_report.csv", [&](std::ostream& o) { write_reports_csv(o, reports); });
  write_file(opts.out_dir, "increment_stats.csv", [&](std::ostream& o) { write_increment_stats_csv(o, stats); });

  std::size_t checked = 0;
  std::size_t failed = 0;
  for (const auto& rep : reports) {
    if (!rep.pass) continue;
    ++checked;
    if (!*rep.pass) {
      ++failed;
      std::cout << "FAIL " << rep.name << ": estimate " << fmt(rep.estimate) << " se " << fmt(rep.std_error)
                << " analytic " << fmt(*rep.analytic) << '\n';
    }
  }
  for (const auto& s : stats) {
    if (!s.pass) continue;
    ++checked;
    if (!*s.pass) {
      ++failed;
      std::cout << "FAIL " << s.stat << " r=" << fmt(s.r) << " h=" << fmt(s.h) << ": mc " << fmt(s.mc) << " se "
                << fmt(s.se) << " analytic " << (s.analytic ? fmt(*s.analytic) : "diverges") << '\n';
    }
  }
  std::cout << "verify: " << checked << " checks, " << failed << " failed\n";
  return failed == 0 ? kSuccess : kVerificationFailure;
}

int cmd_qstats(const ExperimentConfig& c, const RunOptions& opts) {
  validate(c);
  const SupModel m = make_model(c);
  ensure_dir(opts.out_dir);
  const Horizon horizon{0.0, c.horizon};
  const std::size_t paths = c.replications;

  std::size_t total_violations = 0;
  std::vector<std::string> summary;
  std::vector<std::pair<SupVariant, QViolation>> violations;

  for (const SupVariant v : c.variants) {
    const SupSimulator sim(v, m, sim_options(c));
    std::vector<QExtraction> per_path(paths);
    parallel_for(paths, opts.threads, [&](std::size_t j) {
      const auto bundle = sim.simulate(horizon, replication_seed(c.seed, v, j));
      per_path[j] = extract_q(bundle, simulate_price(bundle, c.driver_atom));
    });

    QExtraction all;
    for (auto& e : per_path) {
      all.samples.insert(all.samples.end(), e.samples.begin(), e.samples.end());
      all.common_jumps += e.common_jumps;
      all.volatility_only_jumps += e.volatility_only_jumps;
      all.price_only_jumps += e.price_only_jumps;
    }
    const auto bounds = check_q_bounds(all.samples, m.mixture);
    for (const auto& viol : bounds.violations) violations.emplace_back(v, viol);
    total_violations += bounds.violations.size();

    std::vector<double> log_q;
    for (const auto& s : all.samples)
      if (s.q > 0.0) log_q.push_back(std::log(s.q));

    const std::string name = variant_name(v);
    write_file(opts.out_dir, "q_" + name + ".csv", [&](std::ostream& o) { write_q_csv(o, all.samples); });
    write_file(opts.out_dir, "q_" + name + "_log_hist.csv", [&](std::ostream& o) {
      if (log_q.empty())
        o << "bin_left,bin_right,count\n";
      else
        write_histogram_csv(o, histogram(log_q, c.histogram_bins));
    });
    summary.push_back(name + ',' + std::to_string(paths) + ',' + std::to_string(all.common_jumps) + ',' +
                      std::to_string(all.volatility_only_jumps) + ',' + std::to_string(all.price_only_jumps) + ',' +
                      std::to_string(bounds.checked) + ',' + std::to_string(bounds.violations.size()));
  }

  write_file(opts.out_dir, "q_bounds.csv", [&](std::ostream& o) {
    o << "variant,paths,common_jumps,volatility_only_jumps,price_only_jumps,checked,violations\n";
    for (const auto& line : summary) o << line << '\n';
  });
  write_file(opts.out_dir, "q_violations.csv", [&](std::ostream& o) {
    o << "variant,time,q,bound\n";
    for (const auto& [v, viol] : violations)
      o << to_string(v) << ',' << fmt(viol.time) << ',' << fmt(viol.q) << ',' << viol.bound << '\n';
  });
  std::cout << "qstats: " << total_violations << " bound violation(s)\n";
  return total_violations == 0 ? kSuccess : kVerificationFailure;
}

}  // namespace supcogarch::cli
