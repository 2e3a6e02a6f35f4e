#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "supcogarch/levy.hpp"
#include "supcogarch/supcogarch.hpp"

namespace supcogarch::cli {

// A config value that fails parsing or validation. field() is `section.key`.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// The CLI needs this many replications to estimate anything.
inline constexpr std::size_t kMinimumReplications = 100;

enum class ModelType { CompoundPoisson, VarianceGamma };

struct ModelSection {
  ModelType type = ModelType::CompoundPoisson;
  double rate = 1.0;
  double sigma = 1.0;
  double nu = 1.0;
  double theta = 0.0;
  double grid_step = 1.0 / 256.0;
  bool operator==(const ModelSection&) const = default;
};

struct ExperimentConfig {
  ModelSection model;
  double beta = 1.0;
  double eta = 1.0;
  std::vector<double> phi;
  std::vector<double> weight;
  std::vector<SupVariant> variants{SupVariant::Sup1, SupVariant::Sup2, SupVariant::Sup3};
  double horizon = 100.0;
  std::size_t replications = 10'000;
  std::uint64_t seed = 1;
  std::optional<double> burn_in;
  bool stationary_start = true;
  std::size_t driver_atom = 0;
  std::vector<double> increments{1.0};
  std::vector<double> lags{0.5, 1.0, 2.0};
  double tolerance_k = 4.0;
  double tolerance_k_second_order = 5.0;
  std::size_t histogram_bins = 50;
  std::string output_dir = "out";
  std::optional<double> output_grid_step;
  double target_offset = 0.0;
  bool operator==(const ExperimentConfig&) const = default;
};

// Parses the INI text. Unknown sections or keys are rejected by name.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical INI text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

// Module-level preconditions, checked before any simulation starts. Throws
// ConfigError naming the offending field.
void validate(const ExperimentConfig& c);

LevyModel make_levy(const ExperimentConfig& c);
SupModel make_model(const ExperimentConfig& c);

}  // namespace supcogarch::cli
