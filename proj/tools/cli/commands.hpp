#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "cli/config.hpp"

namespace supcogarch::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kVerificationFailure = 2, kIoError = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  unsigned threads = 1;
  std::filesystem::path out_dir;
};

// Each command validates `config` first and writes only below out_dir.
int cmd_simulate(const ExperimentConfig& config, const RunOptions& opts);
int cmd_analytics(const ExperimentConfig& config, const RunOptions& opts);
int cmd_verify(const ExperimentConfig& config, const RunOptions& opts);
int cmd_qstats(const ExperimentConfig& config, const RunOptions& opts);

}  // namespace supcogarch::cli
