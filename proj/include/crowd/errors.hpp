#pragma once

#include <stdexcept>

namespace crowd {

// invalid parameters, malformed config or input files
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// the integrator could not keep the state valid within its halving budget,
// or a run was started from an invalid state
struct SimulationFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// degenerate tessellation input (coincident or collinear generators)
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// classifier fit cannot be performed on the given samples
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace crowd
