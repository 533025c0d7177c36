#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nsac/diagnostics.hpp"
#include "nsac/experiments.hpp"
#include "nsac/stepper.hpp"

using namespace nsac;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

}  // namespace

TEST_CASE("total mass of simple fields") {
  const Mesh1D mesh = Mesh1D::uniform(16);
  const Basis basis = Basis::make(2);
  DGField one(mesh, basis);
  for (double& c : one.coeff) c = 1.0;
  CHECK(total_mass(one) == doctest::Approx(1.0).epsilon(1e-13));
  const DGField wave = l2_project(
      [](double x) { return 0.5 * std::cos(2.0 * kPi * x) + 1.5; }, mesh,
      basis);
  CHECK(total_mass(wave) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("discrete energy of uniform states") {
  const MixtureParams p = study_params();
  const Mesh1D mesh = Mesh1D::uniform(8);
  const Basis basis = Basis::make(2);

  StateVector U(mesh, basis);
  for (double& c : U.rho.coeff) c = 1.0;
  // rho = 1, v = phi = sigma = 0 with the vapor EOS: energy -0.5.
  CHECK(discrete_energy(U, p) == doctest::Approx(-0.5).epsilon(1e-12));

  for (double& c : U.v.coeff) c = 1.0;  // adds rho v^2/2 = 1/2
  CHECK(discrete_energy(U, p) == doctest::Approx(0.0).epsilon(1e-12));

  for (double& c : U.v.coeff) c = 0.0;
  for (double& c : U.phi.coeff) c = 0.5;
  const double expected =
      0.5 * ((std::log(2.0) - 1.5) + (-0.5)) + (p.a / 16.0) / p.gamma;
  CHECK(discrete_energy(U, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("energy balance residual vanishes at equilibrium") {
  const MixtureParams p = study_params();
  const Mesh1D mesh = Mesh1D::uniform(8);
  const Basis basis = Basis::make(2);
  const StateVector U =
      make_initial_state(constant_initial(1.3), p, mesh, basis);
  FluxParams fp;
  fp.alphaB = 7e-3;
  fp.alpha1 = 1e-3;
  CHECK(std::abs(energy_balance_residual(U, U, 1e-3, p, fp)) <= 1e-12);
  const DissipationBreakdown d = dissipation_terms(U, U, p, fp);
  CHECK(std::abs(d.viscous) <= 1e-14);
  CHECK(std::abs(d.mobility) <= 1e-14);
  CHECK(std::abs(d.stab[0]) <= 1e-28);
}

TEST_CASE("experimental orders of convergence") {
  {
    const std::vector<double> errors = {1.0, 0.5};
    const std::vector<double> res = {8, 16};
    const auto rates = compute_eoc(errors, res);
    REQUIRE(rates.size() == 1);
    CHECK(rates[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
  {
    const std::vector<double> errors = {1.0, 1.0 / 16.0};
    const std::vector<double> res = {8, 16};
    CHECK(compute_eoc(errors, res)[0] == doctest::Approx(4.0).epsilon(1e-13));
  }
  {
    const std::vector<double> errors = {0.37, 0.37};
    const std::vector<double> res = {10, 20};
    CHECK(compute_eoc(errors, res)[0] == doctest::Approx(0.0).epsilon(1e-13));
  }
  const std::vector<double> bad = {1.0, -0.5};
  const std::vector<double> res = {8, 16};
  CHECK_THROWS_AS(compute_eoc(bad, res), std::invalid_argument);
  const std::vector<double> single = {1.0};
  const std::vector<double> res1 = {8};
  CHECK_THROWS_AS(compute_eoc(single, res1), std::invalid_argument);
}

TEST_CASE("time-series maximum") {
  const std::vector<double> one = {0.7};
  CHECK(linf_of(one) == doctest::Approx(0.7));
  const std::vector<double> three = {0.1, 0.3, 0.2};
  CHECK(linf_of(three) == doctest::Approx(0.3));
  const std::vector<double> empty;
  CHECK_THROWS_AS(linf_of(empty), std::invalid_argument);
}
