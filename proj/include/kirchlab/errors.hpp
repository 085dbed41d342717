#pragma once

#include <stdexcept>
#include <string>

namespace kirchlab {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector/operator dimension disagreement.
struct DimensionError : Error {
  using Error::Error;
};

/// Adaptive step control drove the step size below representable resolution.
struct ToleranceError : Error {
  using Error::Error;
};

/// Energy grew, or the weighted norm failed to decay over the watch horizon.
struct BlowUpError : Error {
  using Error::Error;
};

/// Two series that must share a sample grid do not, or a required sample
/// time is missing from the grid.
struct GridError : Error {
  using Error::Error;
};

/// Data fed to an audit that only applies in a different decay regime.
struct RegimeError : Error {
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace kirchlab
