#pragma once

#include <stdexcept>

namespace ringlat {

// Invalid physics parameters or malformed configuration input.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Eigensolver, quadrature or time-integrator failure.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signal analysis could not locate the requested feature.
struct DetectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ringlat
