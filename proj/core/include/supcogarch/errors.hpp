#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace supcogarch {

// An analytic moment that is infinite for the given parameters. Raised instead
// of returning floating-point infinity.
class MomentDiverges : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested parameters admit no stationary solution.
class NonStationary : public std::domain_error {
 public:
  NonStationary(const std::string& what, std::optional<std::size_t> atom = std::nullopt)
      : std::domain_error(what), atom_(atom) {}

  // Index of the offending mixture atom, when one is to blame.
  std::optional<std::size_t> atom() const { return atom_; }

 private:
  std::optional<std::size_t> atom_;
};

// A bracketing root search found no sign change.
class NoRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Lévy-measure integral kept growing under refinement.
class DivergentIntegral : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace supcogarch
