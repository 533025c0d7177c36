#pragma once

#include <functional>
#include <optional>

#include "nsac/diagnostics.hpp"
#include "nsac/spatial.hpp"

namespace nsac {

struct TimeGrid {
  double t_end = 0.0;
  double dt = 0.0;
  int n_steps = 0;

  // Requires dt to divide t_end: |n_steps*dt - t_end| <= 1e-12.
  static TimeGrid make(double t_end, double dt);
};

enum class LinearSolverKind { Direct, Bicgstab };

struct SolverConfig {
  double newton_abs_tol = 1e-10;   // max-norm residual bound
  int newton_max_iter = 30;
  double linear_abs_tol = 1e-10;   // used by the iterative backend
  int max_step_halvings = 8;       // damping retries on positivity loss
  LinearSolverKind linear_solver = LinearSolverKind::Direct;
  void validate() const;
};

/// Closed-form initial data. dphi0/d2phi0 are the first and second space
/// derivatives of phi0; they feed the induced sigma, mu and tau fields.
struct InitialData {
  std::function<double(double)> rho0, v0, phi0, dphi0, d2phi0;
};

enum class SigmaInit {
  // sigma0 = L2 projection of phi0'.
  Projection,
  // sigma0 solves the discrete gradient relation against phi0_h (volume term
  // plus interior-face lifting), so the very first step already satisfies the
  // discrete energy identity. Used by the source-free runs.
  DiscreteCompatible,
};

// Projects (rho0, v0, phi0) and the induced fields
//   sigma0 = phi0', mu0 = d(rho ftilde)/dphi - gamma sigma0',
//   tau0 = d(rho ftilde)/drho + v0^2/2
// onto the broken space, then applies the endpoint pins to v and sigma.
StateVector make_initial_state(const InitialData& init, const MixtureParams& p,
                               const Mesh1D& mesh, const Basis& basis,
                               SigmaInit sigma_mode = SigmaInit::Projection,
                               const BoundaryValues& pins = {});

/// Time-dependent Dirichlet data for the velocity pins (sigma pins are
/// homogeneous). Null schedule means homogeneous walls.
struct BoundarySchedule {
  std::function<double(double)> v_left, v_right;
};

BoundaryValues boundary_at(const BoundarySchedule* bcs, double t);

struct NewtonStats {
  int iterations = 0;
  double residual_norm = 0.0;
  int halvings = 0;
};

// One implicit step U_old -> U_new: Newton iteration with initial guess U_old,
// finite-difference block-banded Jacobian, and update damping when an iterate
// loses density positivity. Throws NonConvergenceError or
// DensityPositivityError; U_old is untouched on failure.
StateVector newton_step(const ResidualAssembler& assembler,
                        const StateVector& U_old, double t_old, double dt,
                        const SolverConfig& cfg, const BoundaryValues& bc_new,
                        const BoundaryValues& bc_mid,
                        const SourceTerms* sources,
                        NewtonStats* stats = nullptr);

using StepObserver = std::function<void(int step, double t,
                                        const StateVector& state,
                                        const StepDiagnostics& diag)>;

struct TrajectorySummary {
  StateVector final_state;
  std::vector<StepDiagnostics> diagnostics;  // [0] is the initial state
  long total_newton_iterations = 0;
  int max_newton_iterations = 0;
  double max_phi_excursion = 0.0;  // largest distance of phi outside [0,1]
};

// Advances n_steps, recording diagnostics after every accepted step and
// invoking the observer. Solver failures are rethrown as StepFailureError
// carrying the step index.
TrajectorySummary run(const StateVector& U0, const TimeGrid& grid,
                      const MixtureParams& p, const FluxParams& fp,
                      const SolverConfig& cfg, const BoundarySchedule* bcs,
                      const SourceTerms* sources,
                      const StepObserver& observer = {});

}  // namespace nsac
