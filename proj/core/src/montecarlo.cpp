#include "supcogarch/montecarlo.hpp"

#include <algorithm>
#include <stdexcept>

#include "supcogarch/parallel.hpp"
#include "supcogarch/price.hpp"
#include "supcogarch/rng.hpp"

namespace supcogarch {

std::uint64_t replication_seed(std::uint64_t root, SupVariant variant, std::size_t rep) {
  return derive_seed(root, {static_cast<std::uint64_t>(Stream::Replication), static_cast<std::uint64_t>(variant),
                            static_cast<std::uint64_t>(rep)});
}

ReplicationSample run_replications(const SupModel& model, const ReplicationSpec& spec, std::size_t n,
                                   std::uint64_t root_seed, unsigned threads) {
  if (n == 0) throw std::invalid_argument("run_replications: at least one replication is required");
  if (!spec.increment_starts.empty() && !(spec.increment_length > 0.0))
    throw std::invalid_argument("run_replications: increment length must be positive");
  double end = 0.0;
  for (double t : spec.vol_times) {
    if (!(t >= 0.0)) throw std::invalid_argument("run_replications: observation times must be nonnegative");
    end = std::max(end, t);
  }
  for (double s : spec.increment_starts) {
    if (!(s >= 0.0)) throw std::invalid_argument("run_replications: increment starts must be nonnegative");
    end = std::max(end, s + spec.increment_length);
  }
  if (!(end > 0.0)) end = 1.0;

  const SupSimulator sim(spec.variant, model, SupSimOptions{spec.burn_in, true});
  const std::size_t atoms = model.mixture.size();
  ReplicationSample out;
  out.aggregate.assign(spec.vol_times.size(), std::vector<double>(n));
  out.components.assign(atoms, std::vector<std::vector<double>>(spec.vol_times.size(), std::vector<double>(n)));
  out.increments.assign(spec.increment_starts.size(), std::vector<double>(n));

  parallel_for(n, threads, [&](std::size_t rep) {
    const auto bundle = sim.simulate(Horizon{0.0, end}, replication_seed(root_seed, spec.variant, rep));
    for (std::size_t k = 0; k < spec.vol_times.size(); ++k) {
      const double t = spec.vol_times[k];
      out.aggregate[k][rep] = bundle.aggregate.value_at(t);
      for (std::size_t i = 0; i < atoms; ++i) out.components[i][k][rep] = bundle.components[i].value_at(t);
    }
    if (!spec.increment_starts.empty()) {
      const auto price = simulate_price(bundle, spec.driver_atom);
      for (std::size_t k = 0; k < spec.increment_starts.size(); ++k) {
        const double s = spec.increment_starts[k];
        out.increments[k][rep] = price.value_at(s + spec.increment_length) - price.value_at(s);
      }
    }
  });
  return out;
}

}  // namespace supcogarch
