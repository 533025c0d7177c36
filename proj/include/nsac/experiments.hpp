#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsac/config.hpp"
#include "nsac/diagnostics.hpp"

namespace nsac {

// Source-free initial states. The two-interface profile places smoothed
// interfaces at x = 0.3 and 0.7 with width delta = 4*sqrt(gamma) and blends
// the density between the bulk values through the interpolation function.
InitialData two_interface_initial(double rho_liquid, double rho_vapor,
                                  double gamma);
InitialData constant_initial(double rho0);

struct RunStats {
  long total_newton_iterations = 0;
  int max_newton_iterations = 0;
  double max_phi_excursion = 0.0;
};

struct MmsCaseResult {
  std::array<double, 3> linf_errors{};   // rho, v, phi in L-inf(0,T; L2)
  std::array<double, 3> final_errors{};  // L2 errors at t_end
  RunStats stats;
};

// One manufactured-solution run with sources and exact-trace boundary data.
MmsCaseResult run_manufactured_case(int degree, int n_cells, double dt,
                                    double t_end, const MixtureParams& physics,
                                    const FluxParams& flux,
                                    const SolverConfig& solver);

struct ConvergenceTable {
  std::vector<double> resolution;            // N, or dt for the time study
  std::array<std::vector<double>, 3> errors;  // rho, v, phi
  std::array<std::vector<double>, 3> eoc;     // one entry fewer than errors
};

ConvergenceTable run_convergence_space(const ExperimentConfig& cfg,
                                       int threads = 1);
ConvergenceTable run_convergence_time(const ExperimentConfig& cfg,
                                      int threads = 1);

// CSV with header N,error_rho,eoc_rho,error_v,eoc_v,error_phi,eoc_phi
// (dt instead of N for the temporal table); EOC cells of the first row are
// empty.
std::string csv_convergence(const ConvergenceTable& table, bool temporal);

struct EnergySeries {
  double eta = 0.0;
  std::vector<StepDiagnostics> rows;  // [0] is the initial state
  RunStats stats;
};

std::vector<EnergySeries> run_energy(const ExperimentConfig& cfg,
                                     int threads = 1);

// CSV with header t,mass,energy,visc_diss,mobility_diss,stab_diss,balance_residual.
std::string csv_energy(const EnergySeries& series);

struct SingleRunResult {
  std::vector<StepDiagnostics> rows;
  RunStats stats;
  std::array<double, 3> final_errors{};  // manufactured runs only
};

SingleRunResult run_single(const ExperimentConfig& cfg);

struct CheckOutcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

// Finest-pair EOC within [degree+0.7, degree+1.3] (spatial) or [1.8, 2.2]
// (temporal) for all three variables.
CheckOutcome check_convergence(const ExperimentConfig& cfg,
                               const ConvergenceTable& table, bool temporal);

// Mass constant to 1e-9, energy non-increasing to 1e-8, per-step balance
// residual within 1e-8; the eta-ordering comparison is reported as a warning.
CheckOutcome check_energy(const std::vector<EnergySeries>& series);

}  // namespace nsac
