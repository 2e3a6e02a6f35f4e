#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "supcogarch/supcogarch.hpp"

namespace supcogarch {

// What one stationary replication on [0, T] records. T is the largest time
// any observation needs.
struct ReplicationSpec {
  SupVariant variant = SupVariant::Sup1;
  std::vector<double> vol_times;         // V̄ and every V^{φ_i} sampled here
  std::vector<double> increment_starts;  // price increments over [s, s + r]
  double increment_length = 1.0;
  std::size_t driver_atom = 0;
  std::optional<double> burn_in;
};

// Column-major: outer index is the observation, inner index the replication.
struct ReplicationSample {
  std::vector<std::vector<double>> aggregate;                // [time][rep]
  std::vector<std::vector<std::vector<double>>> components;  // [atom][time][rep]
  std::vector<std::vector<double>> increments;               // [start][rep]
};

// Seed of replication `rep` under `root`; independent of thread count.
std::uint64_t replication_seed(std::uint64_t root, SupVariant variant, std::size_t rep);

ReplicationSample run_replications(const SupModel& model, const ReplicationSpec& spec, std::size_t n,
                                   std::uint64_t root_seed, unsigned threads);

}  // namespace supcogarch
