#pragma once

#include <stdexcept>
#include <string>

namespace secbeam {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file problems.
struct ConfigError : Error {
  using Error::Error;
};
struct MissingKey : ConfigError {
  explicit MissingKey(const std::string& key)
      : ConfigError("missing required config key: " + key), key(key) {}
  std::string key;
};
struct InvalidValue : ConfigError {
  InvalidValue(const std::string& key, const std::string& why)
      : ConfigError("invalid config value for '" + key + "': " + why), key(key) {}
  std::string key;
};

// Shape mismatch between channel matrices, beamformers, and the configured
// dimensions.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A matrix required to be positive semidefinite fails the check beyond
// numerical tolerance.
struct NonPSD : Error {
  using Error::Error;
};

// Inputs contain NaN or infinity.
struct NonFiniteInput : Error {
  using Error::Error;
};

// The surrogate anchor makes a fractional bound undefined (numerator at the
// anchor is essentially zero, so the square-root linearization has no slope).
struct DegenerateAnchor : Error {
  using Error::Error;
};

// The interior-point solver failed to produce a usable certificate.
struct NumericalFailure : Error {
  using Error::Error;
};

}  // namespace secbeam
