#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "nsac/mms.hpp"
#include "nsac/spatial.hpp"

using namespace nsac;

namespace {

MixtureParams study_params() {
  MixtureParams p;
  p.liquid = {1.5, std::log(2.0), 0.0};
  p.vapor = {1.0, 0.0, 0.5};
  p.a = 0.1;
  p.gamma = 1e-3;
  p.eta = 1.0;
  p.nu_liquid = 1e-3;
  p.nu_vapor = 1e-3;
  return p;
}

DGField random_field(const Mesh1D& mesh, const Basis& basis,
                     std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DGField f(mesh, basis);
  for (double& c : f.coeff) c = dist(rng);
  return f;
}

// Matching traces at every interior face (for degree 0 this must be a global
// constant).
DGField random_continuous_field(const Mesh1D& mesh, const Basis& basis,
                                std::mt19937_64& rng, double lo = -1.0,
                                double hi = 1.0) {
  DGField f = random_field(mesh, basis, rng, lo, hi);
  const int nn = basis.n_nodes();
  if (basis.degree == 0) {
    for (double& c : f.coeff) c = f.coeff[0];
    return f;
  }
  for (int c = 1; c < mesh.n_cells(); ++c)
    f.cell(c)[0] = f.cell(c - 1)[nn - 1];
  return f;
}

StateVector random_state(const Mesh1D& mesh, const Basis& basis,
                         std::mt19937_64& rng, bool continuous = false) {
  StateVector U(mesh, basis);
  auto make = [&](double lo, double hi) {
    return continuous ? random_continuous_field(mesh, basis, rng, lo, hi)
                      : random_field(mesh, basis, rng, lo, hi);
  };
  U.rho = make(0.8, 2.2);
  U.v = make(-1.0, 1.0);
  U.phi = make(0.0, 1.0);
  U.mu = make(-1.0, 1.0);
  U.tau = make(-1.0, 1.0);
  U.sigma = make(-1.0, 1.0);
  return U;
}

double sum_jump_rho_v_tau(const StateVector& U) {
  double acc = 0.0;
  for (int f = 1; f < U.mesh().n_cells(); ++f) {
    const double left = U.rho.trace_right(f - 1) * U.v.trace_right(f - 1) *
                        U.tau.trace_right(f - 1);
    const double right =
        U.rho.trace_left(f) * U.v.trace_left(f) * U.tau.trace_left(f);
    acc += left - right;
  }
  return acc;
}

}  // namespace

TEST_CASE("fluxes vanish on globally continuous states") {
  std::mt19937_64 rng(101);
  FluxParams fp;
  fp.alphaB = 1e-2;
  fp.alpha1 = 0.5;
  fp.alpha2 = 0.25;
  fp.alpha3 = 0.75;
  const MixtureParams mp = study_params();
  for (int degree : {0, 1, 2, 3}) {
    const Mesh1D mesh = Mesh1D::uniform(8);
    const Basis basis = Basis::make(degree);
    for (int trial = 0; trial < 50; ++trial) {
      const StateVector U = random_state(mesh, basis, rng, true);
      const DGField test = random_field(mesh, basis, rng);
      for (int slot = 1; slot <= 6; ++slot)
        CHECK(std::abs(flux_terms(U, slot, test, fp, mp)) <= 1e-12);
    }
  }
}

TEST_CASE("flux slot 5 is identically zero") {
  std::mt19937_64 rng(103);
  const Mesh1D mesh = Mesh1D::uniform(8);
  const Basis basis = Basis::make(2);
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alpha1 = fp.alpha2 = fp.alpha3 = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector U = random_state(mesh, basis, rng);
    const DGField test = random_field(mesh, basis, rng);
    CHECK(flux_terms(U, 5, test, fp, mp) == 0.0);
  }
}

TEST_CASE("flux slot 1 worked example") {
  // Single interior face with (rho v) traces (2, 4) and test traces (1, 1).
  const Mesh1D mesh = Mesh1D::uniform(2);
  const Basis basis = Basis::make(1);
  const MixtureParams mp = study_params();
  StateVector U(mesh, basis);
  for (double& c : U.rho.coeff) c = 1.0;
  U.v.cell(0)[0] = 2.0;
  U.v.cell(0)[1] = 2.0;
  U.v.cell(1)[0] = 4.0;
  U.v.cell(1)[1] = 4.0;
  DGField test(mesh, basis);
  for (double& c : test.coeff) c = 1.0;
  FluxParams fp;  // alpha1 = 0
  CHECK(flux_terms(U, 1, test, fp, mp) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(flux_terms(U, 0, test, fp, mp), std::invalid_argument);
  CHECK_THROWS_AS(flux_terms(U, 7, test, fp, mp), std::invalid_argument);
}

TEST_CASE("flux terms are linear in the test field") {
  std::mt19937_64 rng(107);
  const Mesh1D mesh = Mesh1D::uniform(6);
  const Basis basis = Basis::make(2);
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alpha1 = 0.3;
  fp.alpha2 = 0.2;
  fp.alpha3 = 0.1;
  const StateVector U = random_state(mesh, basis, rng);
  for (int slot = 1; slot <= 6; ++slot) {
    DGField test = random_field(mesh, basis, rng);
    const double once = flux_terms(U, slot, test, fp, mp);
    for (double& c : test.coeff) c *= 2.0;
    const double twice = flux_terms(U, slot, test, fp, mp);
    CHECK(twice == doctest::Approx(2.0 * once).epsilon(1e-12));
  }
}

TEST_CASE("mass-flux condition of the density flux") {
  std::mt19937_64 rng(109);
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alpha1 = 0.5;  // must drop out against a constant test function
  for (int degree : {0, 1, 2}) {
    const Mesh1D mesh = Mesh1D::uniform(8);
    const Basis basis = Basis::make(degree);
    DGField one(mesh, basis);
    for (double& c : one.coeff) c = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector U = random_state(mesh, basis, rng);
      double jump_sum = 0.0;
      for (int f = 1; f < mesh.n_cells(); ++f)
        jump_sum += U.rho.trace_right(f - 1) * U.v.trace_right(f - 1) -
                    U.rho.trace_left(f) * U.v.trace_left(f);
      CHECK(flux_terms(U, 1, one, fp, mp) ==
            doctest::Approx(-jump_sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy-pairing condition of the generic fluxes") {
  std::mt19937_64 rng(113);
  const MixtureParams mp = study_params();
  const FluxParams fp;  // all stabilization off
  for (int degree : {1, 2, 3}) {
    const Mesh1D mesh = Mesh1D::uniform(8);
    const Basis basis = Basis::make(degree);
    for (int trial = 0; trial < 100; ++trial) {
      const StateVector U = random_state(mesh, basis, rng);
      const double combo = flux_terms(U, 1, U.tau, fp, mp) +
                           flux_terms(U, 2, U.v, fp, mp) +
                           flux_terms(U, 3, U.mu, fp, mp) +
                           sum_jump_rho_v_tau(U);
      CHECK(std::abs(combo) <= 1e-11);
    }
  }
}

TEST_CASE("viscous form is symmetric") {
  std::mt19937_64 rng(127);
  const MixtureParams mp = study_params();
  const Mesh1D mesh = Mesh1D::uniform(6);
  const Basis basis = Basis::make(2);
  for (int trial = 0; trial < 50; ++trial) {
    const DGField phi = random_field(mesh, basis, rng, 0.0, 1.0);
    const DGField v = random_field(mesh, basis, rng);
    const DGField x = random_field(mesh, basis, rng);
    const double vx = viscous_form(phi, v, x, mp, 7e-3);
    const double xv = viscous_form(phi, x, v, mp, 7e-3);
    CHECK(vx == doctest::Approx(xv).epsilon(1e-12));
  }
}

TEST_CASE("viscous form of continuous fields with zero boundary trace") {
  const MixtureParams mp = study_params();
  const Mesh1D mesh = Mesh1D::uniform(8);
  const Basis basis = Basis::make(3);
  // Nodal interpolants of smooth functions vanishing at both walls.
  auto vf = [](double x) { return std::sin(M_PI * x); };
  auto xf = [](double x) { return x * (1.0 - x); };
  auto pf = [](double x) { return 0.5 + 0.4 * std::cos(2.0 * M_PI * x); };
  DGField v(mesh, basis), x(mesh, basis), phi(mesh, basis);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int j = 0; j < basis.n_nodes(); ++j) {
      const double pos =
          mesh.left(c) + 0.5 * (basis.nodes[j] + 1.0) * mesh.size(c);
      v.cell(c)[j] = vf(pos);
      x.cell(c)[j] = xf(pos);
      phi.cell(c)[j] = pf(pos);
    }
  // Quadrature value of int nu(phi) v' x' on the interpolants.
  double expected = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int q = 0; q < basis.n_quad(); ++q) {
      double dv = 0.0, dx = 0.0, p = 0.0;
      for (int j = 0; j < basis.n_nodes(); ++j) {
        dv += v.cell(c)[j] * basis.der_at_quad[q * basis.n_nodes() + j];
        dx += x.cell(c)[j] * basis.der_at_quad[q * basis.n_nodes() + j];
        p += phi.cell(c)[j] * basis.val_at_quad[q * basis.n_nodes() + j];
      }
      const double jac = 2.0 / mesh.size(c);
      expected += 0.5 * mesh.size(c) * basis.quad.weights[q] *
                  viscosity(p, mp) * (dv * jac) * (dx * jac);
    }
  CHECK(viscous_form(phi, v, x, mp, 2e-2) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("viscous form is nonnegative for the tabulated penalties") {
  std::mt19937_64 rng(131);
  const MixtureParams mp = study_params();
  const std::pair<int, double> table[] = {
      {0, 1e-3}, {1, 1.7e-3}, {2, 7e-3}, {3, 2e-2}};
  for (const auto& [degree, alphaB] : table) {
    const Mesh1D mesh = Mesh1D::uniform(8);
    const Basis basis = Basis::make(degree);
    for (int trial = 0; trial < 200; ++trial) {
      const DGField phi = random_field(mesh, basis, rng, 0.0, 1.0);
      DGField v = random_field(mesh, basis, rng);
      if (degree >= 1) {
        v.cell(0)[0] = 0.0;
        v.cell(mesh.n_cells() - 1)[degree] = 0.0;
      }
      CHECK(viscous_form(phi, v, v, mp, alphaB) >= -1e-14);
      CHECK(viscous_form(phi, v, v, mp, 10.0) >= -1e-14);
    }
  }
}

TEST_CASE("constant equilibrium has zero residual") {
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alphaB = 7e-3;
  fp.alpha1 = 1e-3;
  const Mesh1D mesh = Mesh1D::uniform(8);
  const Basis basis = Basis::make(2);
  const double rho_star = 1.3;

  StateVector U(mesh, basis);
  for (double& c : U.rho.coeff) c = rho_star;
  for (double& c : U.tau.coeff) c = mixture_energy_drho(rho_star, 0.0, mp);
  // v, phi, mu, sigma all zero.

  const ResidualAssembler assembler(mesh, basis, mp, fp);
  std::vector<double> residual(assembler.n_dof());
  assembler.assemble(U, U, 0.0, 1e-3, {}, {}, nullptr, residual);
  double norm = 0.0;
  for (double r : residual) norm = std::max(norm, std::abs(r));
  CHECK(norm <= 1e-12);
}

TEST_CASE("residual rejects invalid inputs") {
  const MixtureParams mp = study_params();
  const FluxParams fp{7e-3, 0, 0, 0};
  const Mesh1D mesh = Mesh1D::uniform(4);
  const Basis basis = Basis::make(1);
  const ResidualAssembler assembler(mesh, basis, mp, fp);
  StateVector U(mesh, basis);
  for (double& c : U.rho.coeff) c = 1.0;
  std::vector<double> residual(assembler.n_dof());
  CHECK_THROWS_AS(
      assembler.assemble(U, U, 0.0, 0.0, {}, {}, nullptr, residual),
      std::invalid_argument);
  StateVector bad = U;
  for (double& c : bad.rho.coeff) c = -1.0;
  CHECK_THROWS_AS(
      assembler.assemble(U, bad, 0.0, 1e-3, {}, {}, nullptr, residual),
      DensityPositivityError);
}

TEST_CASE("finite-difference jacobian matches directional differences") {
  std::mt19937_64 rng(137);
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alphaB = 7e-3;
  fp.alpha1 = 1e-3;
  fp.alpha2 = 2e-3;
  fp.alpha3 = 3e-3;
  const Mesh1D mesh = Mesh1D::uniform(6);
  const Basis basis = Basis::make(2);
  const ResidualAssembler assembler(mesh, basis, mp, fp);
  const int n = assembler.n_dof();
  const int m = assembler.block_size();

  StateVector U_old(mesh, basis);
  U_old.rho = random_field(mesh, basis, rng, 1.0, 2.0);
  U_old.v = random_field(mesh, basis, rng, -0.3, 0.3);
  U_old.phi = random_field(mesh, basis, rng, 0.2, 0.8);
  U_old.mu = random_field(mesh, basis, rng, -0.3, 0.3);
  U_old.tau = random_field(mesh, basis, rng, -0.3, 0.3);
  U_old.sigma = random_field(mesh, basis, rng, -0.3, 0.3);
  StateVector U_new = U_old;

  const double dt = 1e-2;
  std::vector<double> base(n), bumped(n);
  assembler.assemble(U_old, U_new, 0.0, dt, {}, {}, nullptr, base);
  RingBlockMatrix jac(n / m, m, false);
  StateVector probe = U_new;
  assembler.fd_jacobian(U_old, probe, 0.0, dt, {}, {}, nullptr, base, jac);

  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> du(n), xm(n), jdu(n);
  for (double& e : du) e = dist(rng);
  const double eps = 1e-7;
  U_new.to_vector(xm);
  for (int i = 0; i < n; ++i) xm[i] += eps * du[i];
  StateVector U_bumped(mesh, basis);
  U_bumped.from_vector(xm);
  assembler.assemble(U_old, U_bumped, 0.0, dt, {}, {}, nullptr, bumped);
  jac.matvec(du, jdu);
  double worst = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs((bumped[i] - base[i]) / eps - jdu[i]));
    scale = std::max(scale, std::abs(jdu[i]));
  }
  CHECK(worst <= 2e-5 * scale);
}

TEST_CASE("residual on the projected manufactured solution shrinks with h") {
  const MixtureParams mp = study_params();
  const ManufacturedSolution mms(mp);
  FluxParams fp;
  fp.alphaB = 7e-3;
  fp.alpha1 = 1e-3;
  const int degree = 2;
  const double dt = 1e-5, t0 = 0.011;
  const SourceTerms sources = mms.source_terms();

  auto residual_norm = [&](int n_cells) {
    const Mesh1D mesh = Mesh1D::uniform(n_cells);
    const Basis basis = Basis::make(degree);
    auto project_at = [&](double t) {
      StateVector U(mesh, basis);
      U.rho = l2_project([&](double x) { return mms.rho(x, t); }, mesh, basis);
      U.v = l2_project([&](double x) { return mms.v(x, t); }, mesh, basis);
      U.phi = l2_project([&](double x) { return mms.phi(x, t); }, mesh, basis);
      U.mu = l2_project([&](double x) { return mms.mu(x, t); }, mesh, basis);
      U.tau = l2_project([&](double x) { return mms.tau(x, t); }, mesh, basis);
      U.sigma =
          l2_project([&](double x) { return mms.sigma(x, t); }, mesh, basis);
      return U;
    };
    const StateVector U_old = project_at(t0);
    const StateVector U_new = project_at(t0 + dt);
    const ResidualAssembler assembler(mesh, basis, mp, fp);
    std::vector<double> residual(assembler.n_dof());
    const BoundaryValues bc_new{mms.v(0.0, t0 + dt), mms.v(1.0, t0 + dt), 0.0,
                                0.0};
    const BoundaryValues bc_mid{0.5 * (mms.v(0.0, t0) + mms.v(0.0, t0 + dt)),
                                0.5 * (mms.v(1.0, t0) + mms.v(1.0, t0 + dt)),
                                0.0, 0.0};
    assembler.assemble(U_old, U_new, t0, dt, bc_new, bc_mid, &sources,
                       residual);
    // Pinned rows compare projected against exact traces; they carry the
    // projection error rather than the operator consistency error.
    const int nn = basis.n_nodes();
    const int m = StateVector::n_fields * nn;
    residual[0 * m + StateVector::V * nn + 0] = 0.0;
    residual[0 * m + StateVector::SIGMA * nn + 0] = 0.0;
    residual[(n_cells - 1) * m + StateVector::V * nn + degree] = 0.0;
    residual[(n_cells - 1) * m + StateVector::SIGMA * nn + degree] = 0.0;
    double norm = 0.0;
    for (double r : residual) norm = std::max(norm, std::abs(r));
    return norm;
  };

  const double coarse = residual_norm(8);
  const double fine = residual_norm(16);
  const double finest = residual_norm(32);
  CHECK(coarse < 1.0);
  CHECK(fine < coarse / 4.0);
  CHECK(finest < fine / 4.0);
}

TEST_CASE("periodic jacobian matches directional differences across the wrap") {
  std::mt19937_64 rng(139);
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alphaB = 7e-3;
  fp.alpha1 = 1e-3;
  // 7 cells: the ring coloring cannot fall back to plain mod-3 striping.
  const Mesh1D mesh = Mesh1D::uniform(7, true);
  const Basis basis = Basis::make(2);
  const ResidualAssembler assembler(mesh, basis, mp, fp);
  const int n = assembler.n_dof();
  const int m = assembler.block_size();

  StateVector U_old(mesh, basis);
  U_old.rho = random_field(mesh, basis, rng, 1.0, 2.0);
  U_old.v = random_field(mesh, basis, rng, -0.3, 0.3);
  U_old.phi = random_field(mesh, basis, rng, 0.2, 0.8);
  U_old.mu = random_field(mesh, basis, rng, -0.3, 0.3);
  U_old.tau = random_field(mesh, basis, rng, -0.3, 0.3);
  U_old.sigma = random_field(mesh, basis, rng, -0.3, 0.3);
  StateVector U_new = U_old;

  const double dt = 1e-2;
  std::vector<double> base(n), bumped(n);
  assembler.assemble(U_old, U_new, 0.0, dt, {}, {}, nullptr, base);
  RingBlockMatrix jac(n / m, m, true);
  StateVector probe = U_new;
  assembler.fd_jacobian(U_old, probe, 0.0, dt, {}, {}, nullptr, base, jac);

  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> du(n), xm(n), jdu(n);
  for (double& e : du) e = dist(rng);
  const double eps = 1e-7;
  U_new.to_vector(xm);
  for (int i = 0; i < n; ++i) xm[i] += eps * du[i];
  StateVector U_bumped(mesh, basis);
  U_bumped.from_vector(xm);
  assembler.assemble(U_old, U_bumped, 0.0, dt, {}, {}, nullptr, bumped);
  jac.matvec(du, jdu);
  double worst = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs((bumped[i] - base[i]) / eps - jdu[i]));
    scale = std::max(scale, std::abs(jdu[i]));
  }
  CHECK(worst <= 2e-5 * scale);
}

TEST_CASE("periodic fluxes vanish on wrap-continuous states") {
  std::mt19937_64 rng(141);
  const MixtureParams mp = study_params();
  FluxParams fp;
  fp.alpha1 = 0.4;
  fp.alpha2 = 0.3;
  fp.alpha3 = 0.2;
  const Mesh1D mesh = Mesh1D::uniform(6, true);
  const Basis basis = Basis::make(2);
  for (int trial = 0; trial < 20; ++trial) {
    StateVector U = random_state(mesh, basis, rng, true);
    // Close the ring: the wrap face must see matching traces too.
    for (int f = 0; f < StateVector::n_fields; ++f)
      U.field(f).cell(0)[0] = U.field(f).cell(5)[basis.degree];
    const DGField test = random_field(mesh, basis, rng);
    for (int slot = 1; slot <= 6; ++slot)
      CHECK(std::abs(flux_terms(U, slot, test, fp, mp)) <= 1e-12);
  }
}
