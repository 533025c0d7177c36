#include "nsac/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "nsac/linalg.hpp"

namespace nsac {

TimeGrid TimeGrid::make(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0))
    throw std::invalid_argument("TimeGrid: need dt > 0 and t_end >= 0");
  const long long n = std::llround(t_end / dt);
  if (n < 0 || std::abs(static_cast<double>(n) * dt - t_end) > 1e-12)
    throw std::invalid_argument("TimeGrid: dt must divide t_end evenly");
  return TimeGrid{t_end, dt, static_cast<int>(n)};
}

void SolverConfig::validate() const {
  if (!(newton_abs_tol > 0.0) || !(linear_abs_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be > 0");
  if (newton_max_iter < 1 || max_step_halvings < 0)
    throw std::invalid_argument("SolverConfig: bad iteration limits");
}

StateVector make_initial_state(const InitialData& init, const MixtureParams& p,
                               const Mesh1D& mesh, const Basis& basis,
                               SigmaInit sigma_mode,
                               const BoundaryValues& pins) {
  if (!init.rho0 || !init.v0 || !init.phi0 || !init.dphi0 || !init.d2phi0)
    throw std::invalid_argument("make_initial_state: incomplete initial data");
  StateVector U(mesh, basis);
  U.rho = l2_project(init.rho0, mesh, basis);
  U.v = l2_project(init.v0, mesh, basis);
  U.phi = l2_project(init.phi0, mesh, basis);
  U.mu = l2_project(
      [&](double x) {
        const double rho = init.rho0(x);
        const double phi = init.phi0(x);
        if (!(rho > 0.0)) throw DensityPositivityError(x);
        return mixture_energy_dphi(rho, phi, p) - p.gamma * init.d2phi0(x);
      },
      mesh, basis);
  U.tau = l2_project(
      [&](double x) {
        const double rho = init.rho0(x);
        const double phi = init.phi0(x);
        const double v = init.v0(x);
        if (!(rho > 0.0)) throw DensityPositivityError(x);
        return mixture_energy_drho(rho, phi, p) + 0.5 * v * v;
      },
      mesh, basis);

  if (sigma_mode == SigmaInit::Projection) {
    U.sigma = l2_project(init.dphi0, mesh, basis);
  } else {
    // Discrete gradient of phi0_h: M sigma = int phi0_h' Z - faces of
    // [[phi0_h]]{Z}, so the sigma relation of the scheme holds at t = 0.
    const int nn = basis.n_nodes();
    const int nq = basis.n_quad();
    const int nc = mesh.n_cells();
    std::vector<double> rhs(static_cast<size_t>(nc) * nn, 0.0);
    for (int c = 0; c < nc; ++c) {
      for (int q = 0; q < nq; ++q) {
        const double* bv = &basis.val_at_quad[q * nn];
        const double* bd = &basis.der_at_quad[q * nn];
        double dphi = 0.0;
        for (int j = 0; j < nn; ++j) dphi += U.phi.cell(c)[j] * bd[j];
        // 2/h reference factor cancels against the h/2 volume Jacobian.
        for (int j = 0; j < nn; ++j)
          rhs[c * nn + j] += basis.quad.weights[q] * dphi * bv[j];
      }
    }
    auto face_lift = [&](int cl, int cr) {
      const double jump_phi = U.phi.trace_right(cl) - U.phi.trace_left(cr);
      for (int j = 0; j < nn; ++j) {
        rhs[cl * nn + j] -= jump_phi * 0.5 * basis.trace_right[j];
        rhs[cr * nn + j] -= jump_phi * 0.5 * basis.trace_left[j];
      }
    };
    for (int f = 1; f < nc; ++f) face_lift(f - 1, f);
    if (mesh.periodic) face_lift(nc - 1, 0);
    U.sigma = DGField(mesh, basis);
    std::vector<double> local(nn);
    for (int c = 0; c < nc; ++c) {
      std::vector<double> mass = basis.mass;
      for (int j = 0; j < nn; ++j)
        local[j] = rhs[c * nn + j] * 2.0 / mesh.size(c);
      // Pinned endpoint rows become identity constraints.
      if (!mesh.periodic && basis.degree >= 1 && c == 0) {
        std::fill(mass.begin(), mass.begin() + nn, 0.0);
        mass[0] = 1.0;
        local[0] = pins.sigma_left;
      }
      if (!mesh.periodic && basis.degree >= 1 && c == nc - 1) {
        const int k = basis.degree;
        std::fill(mass.begin() + k * nn, mass.begin() + (k + 1) * nn, 0.0);
        mass[k * nn + k] = 1.0;
        local[k] = pins.sigma_right;
      }
      DenseLU lu = DenseLU::factor(std::move(mass), nn);
      lu.solve(local.data());
      for (int j = 0; j < nn; ++j) U.sigma.cell(c)[j] = local[j];
    }
  }

  if (basis.degree >= 1 && !mesh.periodic) {
    const int k = basis.degree;
    const int nc = mesh.n_cells();
    U.v.cell(0)[0] = pins.v_left;
    U.v.cell(nc - 1)[k] = pins.v_right;
    if (sigma_mode == SigmaInit::Projection) {
      U.sigma.cell(0)[0] = pins.sigma_left;
      U.sigma.cell(nc - 1)[k] = pins.sigma_right;
    }
  }
  return U;
}

BoundaryValues boundary_at(const BoundarySchedule* bcs, double t) {
  BoundaryValues bv;
  if (bcs) {
    if (bcs->v_left) bv.v_left = bcs->v_left(t);
    if (bcs->v_right) bv.v_right = bcs->v_right(t);
  }
  return bv;
}

StateVector newton_step(const ResidualAssembler& assembler,
                        const StateVector& U_old, double t_old, double dt,
                        const SolverConfig& cfg, const BoundaryValues& bc_new,
                        const BoundaryValues& bc_mid,
                        const SourceTerms* sources, NewtonStats* stats) {
  cfg.validate();
  const int n = assembler.n_dof();
  const int m = assembler.block_size();

  StateVector U_cur = U_old;
  StateVector U_try = U_old;
  std::vector<double> residual(n), x_cur(n), x_try(n), update(n);
  RingBlockMatrix jac(n / m, m, assembler.mesh().periodic);

  double norm = 0.0;
  int total_halvings = 0;
  for (int it = 0; it <= cfg.newton_max_iter; ++it) {
    assembler.assemble(U_old, U_cur, t_old, dt, bc_new, bc_mid, sources,
                       residual);
    norm = 0.0;
    for (double r : residual) norm = std::max(norm, std::abs(r));
    if (norm <= cfg.newton_abs_tol) {
      if (stats) {
        stats->iterations = it;
        stats->residual_norm = norm;
        stats->halvings = total_halvings;
      }
      return U_cur;
    }
    if (it == cfg.newton_max_iter) break;

    assembler.fd_jacobian(U_old, U_cur, t_old, dt, bc_new, bc_mid, sources,
                          residual, jac);
    for (int i = 0; i < n; ++i) update[i] = -residual[i];
    if (cfg.linear_solver == LinearSolverKind::Direct) {
      jac.factor();
      jac.solve(update);
    } else {
      const BlockJacobi precond = BlockJacobi::from(jac);
      std::vector<double> rhs = update;
      std::fill(update.begin(), update.end(), 0.0);
      const BicgstabResult lin =
          bicgstab(jac, precond, rhs, update, cfg.linear_abs_tol, 10 * n);
      if (!lin.converged)
        throw SolverError("linear solver stalled at residual " +
                          std::to_string(lin.residual));
    }

    U_cur.to_vector(x_cur);
    double scale = 1.0;
    bool accepted = false;
    double bad_location = 0.0;
    for (int halving = 0; halving <= cfg.max_step_halvings; ++halving) {
      for (int i = 0; i < n; ++i) x_try[i] = x_cur[i] + scale * update[i];
      U_try.from_vector(x_try);
      const auto [rho_min, where] = U_try.min_density();
      if (rho_min > 0.0) {
        accepted = true;
        break;
      }
      bad_location = where;
      scale *= 0.5;
      ++total_halvings;
    }
    if (!accepted) throw DensityPositivityError(bad_location);
    std::swap(U_cur, U_try);
  }
  throw NonConvergenceError(cfg.newton_max_iter, norm);
}

namespace {

double phi_excursion(const StateVector& U) {
  const Basis& b = U.basis();
  const int nn = b.n_nodes();
  const int nq = b.n_quad();
  double lo = 0.0, hi = 1.0;
  for (int c = 0; c < U.phi.n_cells(); ++c) {
    for (int q = 0; q < nq; ++q) {
      const double* bv = &b.val_at_quad[q * nn];
      double phi = 0.0;
      for (int j = 0; j < nn; ++j) phi += U.phi.cell(c)[j] * bv[j];
      lo = std::min(lo, phi);
      hi = std::max(hi, phi);
    }
    lo = std::min({lo, U.phi.trace_left(c), U.phi.trace_right(c)});
    hi = std::max({hi, U.phi.trace_left(c), U.phi.trace_right(c)});
  }
  return std::max(0.0 - lo, hi - 1.0);
}

}  // namespace

TrajectorySummary run(const StateVector& U0, const TimeGrid& grid,
                      const MixtureParams& p, const FluxParams& fp,
                      const SolverConfig& cfg, const BoundarySchedule* bcs,
                      const SourceTerms* sources, const StepObserver& observer) {
  TrajectorySummary summary;
  summary.final_state = U0;
  StepDiagnostics initial;
  initial.time = 0.0;
  initial.total_mass = total_mass(U0.rho);
  initial.energy = discrete_energy(U0, p);
  summary.diagnostics.push_back(initial);
  summary.max_phi_excursion = phi_excursion(U0);

  ResidualAssembler assembler(U0.mesh(), U0.basis(), p, fp);
  StateVector U_prev = U0;
  for (int step = 0; step < grid.n_steps; ++step) {
    const double t_old = grid.dt * step;
    const double t_new = grid.dt * (step + 1);
    const BoundaryValues bc_old = boundary_at(bcs, t_old);
    const BoundaryValues bc_new = boundary_at(bcs, t_new);
    const BoundaryValues bc_mid{0.5 * (bc_old.v_left + bc_new.v_left),
                                0.5 * (bc_old.v_right + bc_new.v_right),
                                0.5 * (bc_old.sigma_left + bc_new.sigma_left),
                                0.5 * (bc_old.sigma_right + bc_new.sigma_right)};
    NewtonStats stats;
    StateVector U_new;
    try {
      U_new = newton_step(assembler, U_prev, t_old, grid.dt, cfg, bc_new,
                          bc_mid, sources, &stats);
    } catch (const SolverError& err) {
      throw StepFailureError(step, err.what());
    }
    summary.total_newton_iterations += stats.iterations;
    summary.max_newton_iterations =
        std::max(summary.max_newton_iterations, stats.iterations);

    const StepDiagnostics diag =
        step_diagnostics(U_prev, U_new, t_new, grid.dt, p, fp, bc_mid);
    summary.diagnostics.push_back(diag);
    summary.max_phi_excursion =
        std::max(summary.max_phi_excursion, phi_excursion(U_new));
    if (observer) observer(step, t_new, U_new, diag);
    U_prev = std::move(U_new);
  }
  summary.final_state = std::move(U_prev);
  return summary;
}

}  // namespace nsac
