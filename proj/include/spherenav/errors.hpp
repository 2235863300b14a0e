#pragma once

#include <stdexcept>
#include <string>

namespace spherenav {

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation is evaluated too close to the projection pole.
struct PoleSingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NearSingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State outside the free space (or its interior, where required).
struct FreeSpaceDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegenerateConfigurationError : std::domain_error {
  using std::domain_error::domain_error;
};

struct InconsistentConstraintsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spherenav
