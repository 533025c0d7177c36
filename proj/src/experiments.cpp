#include "nsac/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "nsac/mms.hpp"

namespace nsac {

InitialData two_interface_initial(double rho_liquid, double rho_vapor,
                                  double gamma) {
  if (!(rho_liquid > 0.0) || !(rho_vapor > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("two_interface_initial: bad parameters");
  const double delta = 4.0 * std::sqrt(gamma);
  auto phi0 = [delta](double x) {
    return 0.5 * (std::tanh((x - 0.3) / delta) - std::tanh((x - 0.7) / delta));
  };
  auto dphi0 = [delta](double x) {
    const double s1 = 1.0 / std::cosh((x - 0.3) / delta);
    const double s2 = 1.0 / std::cosh((x - 0.7) / delta);
    return (s1 * s1 - s2 * s2) / (2.0 * delta);
  };
  auto d2phi0 = [delta](double x) {
    const double z1 = (x - 0.3) / delta, z2 = (x - 0.7) / delta;
    const double s1 = 1.0 / std::cosh(z1), s2 = 1.0 / std::cosh(z2);
    return (-s1 * s1 * std::tanh(z1) + s2 * s2 * std::tanh(z2)) /
           (delta * delta);
  };
  InitialData init;
  init.phi0 = phi0;
  init.dphi0 = dphi0;
  init.d2phi0 = d2phi0;
  init.rho0 = [=](double x) {
    return rho_vapor + (rho_liquid - rho_vapor) * interp(phi0(x));
  };
  init.v0 = [](double) { return 0.0; };
  return init;
}

InitialData constant_initial(double rho0) {
  if (!(rho0 > 0.0))
    throw std::invalid_argument("constant_initial: rho0 must be > 0");
  InitialData init;
  init.rho0 = [rho0](double) { return rho0; };
  init.v0 = [](double) { return 0.0; };
  init.phi0 = [](double) { return 0.0; };
  init.dphi0 = [](double) { return 0.0; };
  init.d2phi0 = [](double) { return 0.0; };
  return init;
}

MmsCaseResult run_manufactured_case(int degree, int n_cells, double dt,
                                    double t_end, const MixtureParams& physics,
                                    const FluxParams& flux,
                                    const SolverConfig& solver) {
  const ManufacturedSolution mms(physics);
  // The manufactured fields are 1-periodic, so the convergence studies run on
  // the periodic topology; wall boundary conditions would contaminate the
  // interior orders through the nonzero exact wall velocity.
  const Mesh1D mesh = Mesh1D::uniform(n_cells, /*periodic=*/true);
  const Basis basis = Basis::make(degree);
  const TimeGrid grid = TimeGrid::make(t_end, dt);

  const StateVector U0 = make_initial_state(mms.initial(), physics, mesh,
                                            basis, SigmaInit::Projection, {});
  const SourceTerms sources = mms.source_terms();

  std::array<std::vector<double>, 3> samples;
  auto sample = [&](const StateVector& U, double t) {
    samples[0].push_back(
        broken_norm_l2(U.rho, [&](double x) { return mms.rho(x, t); }));
    samples[1].push_back(
        broken_norm_l2(U.v, [&](double x) { return mms.v(x, t); }));
    samples[2].push_back(
        broken_norm_l2(U.phi, [&](double x) { return mms.phi(x, t); }));
  };
  sample(U0, 0.0);

  MmsCaseResult result;
  auto observer = [&](int, double t, const StateVector& U,
                      const StepDiagnostics&) {
    sample(U, t);
    result.final_errors = {samples[0].back(), samples[1].back(),
                           samples[2].back()};
  };
  const TrajectorySummary summary =
      run(U0, grid, physics, flux, solver, nullptr, &sources, observer);
  for (int i = 0; i < 3; ++i) result.linf_errors[i] = linf_of(samples[i]);
  if (grid.n_steps == 0) result.final_errors = result.linf_errors;
  result.stats = {summary.total_newton_iterations,
                  summary.max_newton_iterations, summary.max_phi_excursion};
  return result;
}

namespace {

// Runs the given case indices on `threads` workers; exceptions are rethrown
// on the caller in case order.
void parallel_cases(int n_cases, int threads,
                    const std::function<void(int)>& work) {
  threads = std::max(1, std::min(threads, n_cases));
  if (threads == 1) {
    for (int i = 0; i < n_cases; ++i) work(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n_cases);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_cases) return;
        try {
          work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

void enforce_cell_cap(const ExperimentConfig& cfg) {
  const int cap =
      cfg.max_cells > 0 ? cfg.max_cells : default_max_cells(cfg.degree);
  for (int n : cfg.cells)
    if (n > cap)
      throw ConfigError("cell count " + std::to_string(n) +
                        " exceeds the cap " + std::to_string(cap) +
                        " (raise max_cells / --max-cells to override)");
}

ConvergenceTable finish_table(std::vector<double> resolution,
                              std::array<std::vector<double>, 3> errors) {
  ConvergenceTable table;
  table.resolution = std::move(resolution);
  table.errors = std::move(errors);
  for (int var = 0; var < 3; ++var)
    table.eoc[var] = compute_eoc(table.errors[var], table.resolution);
  return table;
}

}  // namespace

ConvergenceTable run_convergence_space(const ExperimentConfig& cfg,
                                       int threads) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::ConvergenceSpace)
    throw ConfigError("run_convergence_space: wrong experiment kind");
  enforce_cell_cap(cfg);
  const int n_cases = static_cast<int>(cfg.cells.size());
  std::vector<MmsCaseResult> results(n_cases);
  parallel_cases(n_cases, threads, [&](int i) {
    const int n = cfg.cells[i];
    try {
      results[i] =
          run_manufactured_case(cfg.degree, n, dt_rule(cfg.degree, n),
                                cfg.t_end, cfg.physics, cfg.flux, cfg.solver);
    } catch (const SolverError& err) {
      throw SolverError("N = " + std::to_string(n) + ": " + err.what());
    }
  });
  std::vector<double> resolution;
  std::array<std::vector<double>, 3> errors;
  for (int i = 0; i < n_cases; ++i) {
    resolution.push_back(cfg.cells[i]);
    for (int var = 0; var < 3; ++var)
      errors[var].push_back(results[i].linf_errors[var]);
  }
  return finish_table(std::move(resolution), std::move(errors));
}

ConvergenceTable run_convergence_time(const ExperimentConfig& cfg,
                                      int threads) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::ConvergenceTime)
    throw ConfigError("run_convergence_time: wrong experiment kind");
  enforce_cell_cap(cfg);
  const int n_cases = static_cast<int>(cfg.dts.size());
  std::vector<MmsCaseResult> results(n_cases);
  parallel_cases(n_cases, threads, [&](int i) {
    try {
      results[i] =
          run_manufactured_case(cfg.degree, cfg.cells[0], cfg.dts[i],
                                cfg.t_end, cfg.physics, cfg.flux, cfg.solver);
    } catch (const SolverError& err) {
      throw SolverError("dt case " + std::to_string(i) + ": " + err.what());
    }
  });
  // Final-time L2 errors against 1/dt as the refinement measure.
  std::vector<double> resolution;
  std::array<std::vector<double>, 3> errors;
  for (int i = 0; i < n_cases; ++i) {
    resolution.push_back(1.0 / cfg.dts[i]);
    for (int var = 0; var < 3; ++var)
      errors[var].push_back(results[i].final_errors[var]);
  }
  ConvergenceTable table = finish_table(std::move(resolution), std::move(errors));
  table.resolution = cfg.dts;  // present dt itself in the table
  return table;
}

std::string csv_convergence(const ConvergenceTable& table, bool temporal) {
  std::ostringstream os;
  os << (temporal ? "dt" : "N")
     << ",error_rho,eoc_rho,error_v,eoc_v,error_phi,eoc_phi\n";
  char buf[64];
  for (size_t i = 0; i < table.resolution.size(); ++i) {
    if (temporal) {
      std::snprintf(buf, sizeof buf, "%.10g", table.resolution[i]);
      os << buf;
    } else {
      os << static_cast<long>(std::llround(table.resolution[i]));
    }
    for (int var = 0; var < 3; ++var) {
      std::snprintf(buf, sizeof buf, "%.12e", table.errors[var][i]);
      os << "," << buf << ",";
      if (i > 0) {
        std::snprintf(buf, sizeof buf, "%.8f", table.eoc[var][i - 1]);
        os << buf;
      }
    }
    os << "\n";
  }
  return os.str();
}

namespace {

InitialData source_free_initial(const ExperimentConfig& cfg) {
  if (cfg.initial == InitialKind::TwoInterface)
    return two_interface_initial(cfg.rho_liquid, cfg.rho_vapor,
                                 cfg.physics.gamma);
  if (cfg.initial == InitialKind::Constant)
    return constant_initial(cfg.rho0_const);
  throw ConfigError("manufactured initial state is not source-free");
}

}  // namespace

std::vector<EnergySeries> run_energy(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::Energy)
    throw ConfigError("run_energy: wrong experiment kind");
  enforce_cell_cap(cfg);
  std::vector<double> etas =
      cfg.eta_list.empty() ? std::vector<double>{cfg.physics.eta}
                           : cfg.eta_list;
  std::vector<EnergySeries> out(etas.size());
  parallel_cases(static_cast<int>(etas.size()), threads, [&](int i) {
    MixtureParams physics = cfg.physics;
    physics.eta = etas[i];
    const Mesh1D mesh = Mesh1D::uniform(cfg.cells[0]);
    const Basis basis = Basis::make(cfg.degree);
    const TimeGrid grid = TimeGrid::make(cfg.t_end, cfg.dts[0]);
    const StateVector U0 =
        make_initial_state(source_free_initial(cfg), physics, mesh, basis,
                           SigmaInit::DiscreteCompatible, {});
    const TrajectorySummary summary =
        run(U0, grid, physics, cfg.flux, cfg.solver, nullptr, nullptr);
    out[i].eta = etas[i];
    out[i].rows = summary.diagnostics;
    out[i].stats = {summary.total_newton_iterations,
                    summary.max_newton_iterations, summary.max_phi_excursion};
  });
  return out;
}

std::string csv_energy(const EnergySeries& series) {
  std::ostringstream os;
  os << "t,mass,energy,visc_diss,mobility_diss,stab_diss,balance_residual\n";
  char buf[64];
  auto put = [&](double v, bool comma = true) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    os << buf << (comma ? "," : "");
  };
  for (const StepDiagnostics& d : series.rows) {
    std::snprintf(buf, sizeof buf, "%.10g", d.time);
    os << buf << ",";
    put(d.total_mass);
    put(d.energy);
    put(d.visc_dissipation);
    put(d.mobility_dissipation);
    put(d.stab_total());
    put(d.energy_balance_residual, false);
    os << "\n";
  }
  return os.str();
}

SingleRunResult run_single(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::SingleRun)
    throw ConfigError("run_single: wrong experiment kind");
  enforce_cell_cap(cfg);
  const Mesh1D mesh = Mesh1D::uniform(cfg.cells[0]);
  const Basis basis = Basis::make(cfg.degree);
  const TimeGrid grid = TimeGrid::make(cfg.t_end, cfg.dts[0]);

  SingleRunResult result;
  auto dump_state = [&](const StateVector& U, int step) {
    if (cfg.field_dump.empty()) return;
    char name[512];
    std::snprintf(name, sizeof name, "%s_step%06d.csv", cfg.field_dump.c_str(),
                  step);
    std::ofstream os(name);
    os << "x,rho,v,phi,mu,tau,sigma\n";
    char buf[64];
    for (int c = 0; c < mesh.n_cells(); ++c)
      for (int j = 0; j < basis.n_nodes(); ++j) {
        const double x =
            mesh.left(c) + 0.5 * (basis.nodes[j] + 1.0) * mesh.size(c);
        std::snprintf(buf, sizeof buf, "%.12e", x);
        os << buf;
        for (int f = 0; f < StateVector::n_fields; ++f) {
          std::snprintf(buf, sizeof buf, "%.12e", U.field(f).cell(c)[j]);
          os << "," << buf;
        }
        os << "\n";
      }
  };

  if (cfg.initial == InitialKind::Manufactured) {
    const ManufacturedSolution mms(cfg.physics);
    const BoundaryValues pins0{mms.v(0.0, 0.0), mms.v(1.0, 0.0), 0.0, 0.0};
    const StateVector U0 = make_initial_state(
        mms.initial(), cfg.physics, mesh, basis, SigmaInit::Projection, pins0);
    const SourceTerms sources = mms.source_terms();
    const BoundarySchedule bcs = mms.boundary();
    dump_state(U0, 0);
    auto observer = [&](int step, double, const StateVector& U,
                        const StepDiagnostics&) {
      if ((step + 1) % cfg.dump_every == 0) dump_state(U, step + 1);
    };
    const TrajectorySummary summary = run(U0, grid, cfg.physics, cfg.flux,
                                          cfg.solver, &bcs, &sources, observer);
    result.rows = summary.diagnostics;
    result.stats = {summary.total_newton_iterations,
                    summary.max_newton_iterations, summary.max_phi_excursion};
    const double t = grid.t_end;
    result.final_errors = {
        broken_norm_l2(summary.final_state.rho,
                       [&](double x) { return mms.rho(x, t); }),
        broken_norm_l2(summary.final_state.v,
                       [&](double x) { return mms.v(x, t); }),
        broken_norm_l2(summary.final_state.phi,
                       [&](double x) { return mms.phi(x, t); })};
  } else {
    const StateVector U0 =
        make_initial_state(source_free_initial(cfg), cfg.physics, mesh, basis,
                           SigmaInit::DiscreteCompatible, {});
    dump_state(U0, 0);
    auto observer = [&](int step, double, const StateVector& U,
                        const StepDiagnostics&) {
      if ((step + 1) % cfg.dump_every == 0) dump_state(U, step + 1);
    };
    const TrajectorySummary summary = run(U0, grid, cfg.physics, cfg.flux,
                                          cfg.solver, nullptr, nullptr, observer);
    result.rows = summary.diagnostics;
    result.stats = {summary.total_newton_iterations,
                    summary.max_newton_iterations, summary.max_phi_excursion};
  }
  return result;
}

CheckOutcome check_convergence(const ExperimentConfig& cfg,
                               const ConvergenceTable& table, bool temporal) {
  CheckOutcome out;
  const double lo = temporal ? 1.8 : cfg.degree + 0.7;
  const double hi = temporal ? 2.2 : cfg.degree + 1.3;
  static const char* names[3] = {"rho", "v", "phi"};
  for (int var = 0; var < 3; ++var) {
    if (table.eoc[var].empty()) {
      out.pass = false;
      out.failures.push_back("no EOC computed");
      continue;
    }
    const double rate = table.eoc[var].back();
    if (!(rate >= lo && rate <= hi)) {
      out.pass = false;
      std::ostringstream os;
      os << "EOC_" << names[var] << " = " << rate << " outside [" << lo << ", "
         << hi << "]";
      out.failures.push_back(os.str());
    }
  }
  return out;
}

CheckOutcome check_energy(const std::vector<EnergySeries>& series) {
  CheckOutcome out;
  for (const EnergySeries& s : series) {
    const double mass0 = s.rows.front().total_mass;
    for (size_t i = 0; i < s.rows.size(); ++i) {
      const double drift = std::abs(s.rows[i].total_mass - mass0);
      if (drift > 1e-9) {
        out.pass = false;
        std::ostringstream os;
        os << "eta=" << s.eta << ": mass drift " << drift << " at t="
           << s.rows[i].time;
        out.failures.push_back(os.str());
        break;
      }
    }
    for (size_t i = 1; i < s.rows.size(); ++i) {
      if (s.rows[i].energy - s.rows[i - 1].energy > 1e-8) {
        out.pass = false;
        std::ostringstream os;
        os << "eta=" << s.eta << ": energy increased by "
           << s.rows[i].energy - s.rows[i - 1].energy << " at t="
           << s.rows[i].time;
        out.failures.push_back(os.str());
        break;
      }
      if (std::abs(s.rows[i].energy_balance_residual) > 1e-8) {
        out.pass = false;
        std::ostringstream os;
        os << "eta=" << s.eta << ": balance residual "
           << s.rows[i].energy_balance_residual << " at t=" << s.rows[i].time;
        out.failures.push_back(os.str());
        break;
      }
    }
  }
  // Qualitative ordering: larger mobility should not dissipate slower. Soft
  // check after an initial transient, reported as a warning only.
  for (size_t i = 0; i < series.size(); ++i)
    for (size_t j = 0; j < series.size(); ++j) {
      if (series[i].eta >= series[j].eta) continue;
      const size_t n = std::min(series[i].rows.size(), series[j].rows.size());
      for (size_t r = 0; r < n; ++r) {
        const double t = series[i].rows[r].time;
        if (t < 0.05) continue;
        if (series[j].rows[r].energy > series[i].rows[r].energy + 1e-6) {
          std::ostringstream os;
          os << "energy(eta=" << series[j].eta << ") > energy(eta="
             << series[i].eta << ") + 1e-6 at t=" << t;
          out.warnings.push_back(os.str());
          r = n;
        }
      }
    }
  return out;
}

}  // namespace nsac
