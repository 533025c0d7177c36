#pragma once

#include <stdexcept>
#include <string>

namespace nsac {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergenceError : SolverError {
  int iterations;
  double residual_norm;
  NonConvergenceError(int it, double res)
      : SolverError("Newton did not converge after " + std::to_string(it) +
                    " iterations, residual " + std::to_string(res)),
        iterations(it),
        residual_norm(res) {}
};

struct DensityPositivityError : SolverError {
  double location;
  explicit DensityPositivityError(double x)
      : SolverError("density lost positivity near x = " + std::to_string(x)),
        location(x) {}
};

struct StepFailureError : SolverError {
  int step;
  StepFailureError(int s, const std::string& why)
      : SolverError("step " + std::to_string(s) + ": " + why), step(s) {}
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nsac
