#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nsac/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  bool check = false;
  int max_cells = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file")
      ->required();
  cmd->add_option("--out", opts.out_path, "output CSV path (overrides config)");
  cmd->add_flag("--check", opts.check, "verify the run's invariants and EOC");
  cmd->add_option("--max-cells", opts.max_cells,
                  "override the desk-scale cell cap");
  cmd->add_option("--threads", opts.threads, "worker threads for sweeps");
}

nsac::ExperimentConfig load(const CommonOpts& opts,
                            nsac::ExperimentKind expected) {
  nsac::ExperimentConfig cfg = nsac::load_config(opts.config_path);
  if (cfg.kind != expected)
    throw nsac::ConfigError("config kind '" + nsac::to_string(cfg.kind) +
                            "' does not match the subcommand");
  if (!opts.out_path.empty()) cfg.output = opts.out_path;
  if (opts.max_cells > 0) cfg.max_cells = opts.max_cells;
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write output file '" + path + "'");
  os << content;
}

std::string eta_suffixed(const std::string& path, double eta) {
  char tag[48];
  std::snprintf(tag, sizeof tag, "_eta%.6g", eta);
  const size_t dot = path.rfind('.');
  if (dot == std::string::npos) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

int report(const nsac::CheckOutcome& outcome) {
  for (const std::string& w : outcome.warnings)
    std::cerr << "warning: " << w << "\n";
  for (const std::string& f : outcome.failures)
    std::cerr << "check failed: " << f << "\n";
  if (!outcome.pass) return kExitCheck;
  std::cerr << "all checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D discontinuous-Galerkin solver for isothermal compressible "
               "two-phase flow with an Allen-Cahn phase field"};
  app.require_subcommand(1);

  CommonOpts space_opts, time_opts, energy_opts, single_opts;
  CLI::App* space = app.add_subcommand(
      "convergence-space", "manufactured-solution spatial convergence table");
  add_common(space, space_opts);
  CLI::App* time = app.add_subcommand(
      "convergence-time", "manufactured-solution temporal convergence table");
  add_common(time, time_opts);
  CLI::App* energy = app.add_subcommand(
      "energy", "source-free run with mass/energy diagnostics");
  add_common(energy, energy_opts);
  CLI::App* single =
      app.add_subcommand("single-run", "one trajectory with diagnostics");
  add_common(single, single_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (space->parsed()) {
      const nsac::ExperimentConfig cfg =
          load(space_opts, nsac::ExperimentKind::ConvergenceSpace);
      const nsac::ConvergenceTable table =
          nsac::run_convergence_space(cfg, space_opts.threads);
      write_file(cfg.output, nsac::csv_convergence(table, false));
      if (space_opts.check)
        return report(nsac::check_convergence(cfg, table, false));
      return kExitOk;
    }
    if (time->parsed()) {
      const nsac::ExperimentConfig cfg =
          load(time_opts, nsac::ExperimentKind::ConvergenceTime);
      const nsac::ConvergenceTable table =
          nsac::run_convergence_time(cfg, time_opts.threads);
      write_file(cfg.output, nsac::csv_convergence(table, true));
      if (time_opts.check)
        return report(nsac::check_convergence(cfg, table, true));
      return kExitOk;
    }
    if (energy->parsed()) {
      const nsac::ExperimentConfig cfg =
          load(energy_opts, nsac::ExperimentKind::Energy);
      const auto series = nsac::run_energy(cfg, energy_opts.threads);
      if (series.size() == 1) {
        write_file(cfg.output, nsac::csv_energy(series[0]));
      } else {
        for (const nsac::EnergySeries& s : series)
          write_file(cfg.output.empty() ? "" : eta_suffixed(cfg.output, s.eta),
                     nsac::csv_energy(s));
      }
      for (const nsac::EnergySeries& s : series)
        if (s.stats.max_phi_excursion > 0.0)
          std::cerr << "note: eta=" << s.eta << " phi left [0,1] by up to "
                    << s.stats.max_phi_excursion << "\n";
      if (energy_opts.check) return report(nsac::check_energy(series));
      return kExitOk;
    }
    if (single->parsed()) {
      const nsac::ExperimentConfig cfg =
          load(single_opts, nsac::ExperimentKind::SingleRun);
      const nsac::SingleRunResult result = nsac::run_single(cfg);
      nsac::EnergySeries as_series;
      as_series.rows = result.rows;
      write_file(cfg.output, nsac::csv_energy(as_series));
      if (result.stats.max_phi_excursion > 0.0)
        std::cerr << "note: phi left [0,1] by up to "
                  << result.stats.max_phi_excursion << "\n";
      if (cfg.initial == nsac::InitialKind::Manufactured)
        std::cerr << "final L2 errors: rho " << result.final_errors[0] << ", v "
                  << result.final_errors[1] << ", phi "
                  << result.final_errors[2] << "\n";
      if (single_opts.check) {
        if (cfg.initial == nsac::InitialKind::Manufactured) {
          std::cerr << "all checks passed (solver converged)\n";
          return kExitOk;
        }
        nsac::EnergySeries series;
        series.eta = cfg.physics.eta;
        series.rows = result.rows;
        return report(nsac::check_energy({series}));
      }
      return kExitOk;
    }
  } catch (const nsac::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const nsac::SolverError& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
