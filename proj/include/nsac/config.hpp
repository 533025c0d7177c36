#pragma once

#include <string>
#include <vector>

#include "nsac/errors.hpp"
#include "nsac/spatial.hpp"
#include "nsac/stepper.hpp"
#include "nsac/thermo.hpp"

namespace nsac {

enum class ExperimentKind { ConvergenceSpace, ConvergenceTime, Energy, SingleRun };
enum class InitialKind { Manufactured, TwoInterface, Constant };

std::string to_string(ExperimentKind k);
std::string to_string(InitialKind k);

/// One experiment, parsed from the sectioned key=value config format. Every
/// physical parameter must be given explicitly; unknown keys are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SingleRun;
  int degree = 0;
  std::vector<int> cells;
  std::vector<double> dts;  // empty for convergence-space (dt_rule applies)
  double t_end = 0.0;
  InitialKind initial = InitialKind::Manufactured;
  std::string output;

  std::vector<double> eta_list;  // energy experiment sweep; may be empty
  double rho0_const = 0.0;       // constant initial state
  double rho_liquid = 0.0;       // two-interface initial state
  double rho_vapor = 0.0;
  std::string field_dump;        // optional per-step field CSV prefix
  int dump_every = 1;
  int max_cells = 0;             // 0: built-in desk-scale caps apply

  MixtureParams physics;
  FluxParams flux;
  SolverConfig solver;

  void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// Time-step rule for the spatial study: dt = 10^floor(log10(1/N)) for
// degree <= 1 and 10^floor(log10(1/N^2)) for degree >= 2.
double dt_rule(int degree, int n_cells);

// Stabilization values (alphaB, alpha1; alpha2 = alpha3 = 0) that give clean
// convergence orders for degrees 0..3.
FluxParams recommended_stabilization(int degree);

// Desk-scale cell-count cap for the spatial study (overridable via max_cells).
int default_max_cells(int degree);

}  // namespace nsac
