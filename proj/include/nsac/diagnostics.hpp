#pragma once

#include <array>
#include <span>
#include <vector>

#include "nsac/spatial.hpp"

namespace nsac {

/// Conserved/dissipated quantities recorded after each accepted step. Along a
/// source-free trajectory the total mass stays constant and the energy is
/// non-increasing up to solver tolerance.
struct StepDiagnostics {
  double time = 0.0;
  double total_mass = 0.0;
  double energy = 0.0;
  double visc_dissipation = 0.0;
  double mobility_dissipation = 0.0;
  std::array<double, 3> stab_dissipation{0.0, 0.0, 0.0};  // tau, v, mu jumps
  double energy_balance_residual = 0.0;

  double stab_total() const {
    return stab_dissipation[0] + stab_dissipation[1] + stab_dissipation[2];
  }
};

double total_mass(const DGField& rho);

// Discrete energy: int rho*ftilde(rho,phi) + gamma/2 sigma^2 + rho/2 v^2.
double discrete_energy(const StateVector& U, const MixtureParams& p);

struct DissipationBreakdown {
  double viscous = 0.0;   // viscous_form of the midpoint velocity
  double mobility = 0.0;  // int eta mu^2 / rho at midpoint states
  std::array<double, 3> stab{0.0, 0.0, 0.0};
};

DissipationBreakdown dissipation_terms(const StateVector& U_old,
                                       const StateVector& U_new,
                                       const MixtureParams& p,
                                       const FluxParams& fp,
                                       const BoundaryValues& bc_mid = {});

// E(new) - E(old) + dt * (all dissipation terms). For the scheme's own steps
// this is an identity up to solver tolerance; the stabilization terms are
// individually nonnegative.
double energy_balance_residual(const StateVector& U_old,
                               const StateVector& U_new, double dt,
                               const MixtureParams& p, const FluxParams& fp,
                               const BoundaryValues& bc_mid = {});

StepDiagnostics step_diagnostics(const StateVector& U_old,
                                 const StateVector& U_new, double t_new,
                                 double dt, const MixtureParams& p,
                                 const FluxParams& fp,
                                 const BoundaryValues& bc_mid = {});

// Experimental orders of convergence: rate_i = log(e_{i-1}/e_i) /
// log(r_i/r_{i-1}) for a refinement sequence r (cell counts, or 1/dt).
std::vector<double> compute_eoc(std::span<const double> errors,
                                std::span<const double> resolutions);

// Max over a nonempty series (the L-infinity-in-time reduction).
double linf_of(std::span<const double> samples);

}  // namespace nsac
