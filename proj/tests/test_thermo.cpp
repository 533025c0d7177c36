#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <functional>
#include <random>

#include "nsac/thermo.hpp"

using namespace nsac;

namespace {

// Equation-of-state parameters of the convergence studies.
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

double central_diff(const std::function<double(double)>& f, double x,
                    double delta) {
  return (f(x + delta) - f(x - delta)) / (2.0 * delta);
}

}  // namespace

TEST_CASE("interpolation function endpoints and midpoint") {
  CHECK(interp(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(interp(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interp(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(interp_deriv(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(interp_deriv(1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("double well values") {
  CHECK(double_well(0.0, 0.1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(double_well(1.0, 0.1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(double_well(0.5, 0.1) == doctest::Approx(0.00625).epsilon(1e-14));
}

TEST_CASE("reflection symmetries of interp and double well") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-0.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const double phi = dist(rng);
    CHECK(interp(phi) + interp(1.0 - phi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(double_well(phi, 0.3) ==
          doctest::Approx(double_well(1.0 - phi, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("stiffened gas bulk energy values") {
  const MixtureParams p = study_params();
  CHECK(bulk_energy(1.0, p.liquid) ==
        doctest::Approx(std::log(2.0) - 1.5).epsilon(1e-14));
  CHECK(bulk_energy(1.0, p.vapor) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(bulk_energy_drho(1.0, p.vapor) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(bulk_energy(0.0, p.liquid), std::domain_error);
  CHECK_THROWS_AS(bulk_energy(-1.0, p.liquid), std::domain_error);
}

TEST_CASE("mixture energy reduces to the bulk phases") {
  const MixtureParams p = study_params();
  for (double rho : {0.5, 1.0, 1.7, 2.4}) {
    CHECK(mixture_energy(rho, 0.0, p) ==
          doctest::Approx(bulk_energy(rho, p.vapor)).epsilon(1e-14));
    CHECK(mixture_energy(rho, 1.0, p) ==
          doctest::Approx(bulk_energy(rho, p.liquid)).epsilon(1e-14));
  }
  // h'(1/2) = 3/2 and W'(1/2) = 0.
  const double expected = 1.5 * ((std::log(2.0) - 1.5) - (-0.5));
  CHECK(mixture_energy_dphi(1.0, 0.5, p) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("viscosity interpolation") {
  MixtureParams p = study_params();
  p.nu_liquid = 0.0125;
  p.nu_vapor = 0.00125;
  CHECK(viscosity(0.0, p) == doctest::Approx(0.00125).epsilon(1e-15));
  CHECK(viscosity(1.0, p) == doctest::Approx(0.0125).epsilon(1e-15));
  CHECK(viscosity(0.5, p) == doctest::Approx(0.006875).epsilon(1e-14));
}

TEST_CASE("analytic derivatives match central differences") {
  const MixtureParams p = study_params();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> rho_dist(0.4, 2.6);
  std::uniform_real_distribution<double> phi_dist(-0.2, 1.2);
  const double delta = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const double rho = rho_dist(rng);
    const double phi = phi_dist(rng);
    CHECK(interp_deriv(phi) ==
          doctest::Approx(central_diff([](double s) { return interp(s); }, phi,
                                       delta))
              .epsilon(1e-6));
    CHECK(double_well_deriv(phi, p.a) ==
          doctest::Approx(central_diff(
                              [&](double s) { return double_well(s, p.a); },
                              phi, delta))
              .epsilon(1e-6));
    CHECK(bulk_energy_drho(rho, p.liquid) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return bulk_energy(s, p.liquid);
                              },
                              rho, delta))
              .epsilon(1e-6));
    CHECK(mixture_energy_dphi(rho, phi, p) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return mixture_energy(rho, s, p);
                              },
                              phi, delta))
              .epsilon(1e-6));
    CHECK(mixture_energy_drho(rho, phi, p) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return mixture_energy(s, phi, p);
                              },
                              rho, delta))
              .epsilon(1e-6));
  }
}

TEST_CASE("finite-difference error scales at second order in the step") {
  // The double well enters scaled by 1/gamma, so the truncation error of the
  // phi-derivative check is visible well above roundoff for both steps.
  const MixtureParams p = study_params();
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> rho_dist(0.6, 2.2);
  std::uniform_real_distribution<double> phi_dist(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double rho = rho_dist(rng);
    const double phi = phi_dist(rng);
    auto err = [&](double delta) {
      return std::abs(mixture_energy_dphi(rho, phi, p) -
                      central_diff(
                          [&](double s) { return mixture_energy(rho, s, p); },
                          phi, delta));
    };
    const double coarse = err(1e-4);
    const double fine = err(1e-5);
    CHECK(coarse <= 150.0 * std::max(fine, 1e-12));
  }
}

TEST_CASE("second derivatives match differentiated first derivatives") {
  const MixtureParams p = study_params();
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> rho_dist(0.4, 2.6);
  std::uniform_real_distribution<double> phi_dist(-0.2, 1.2);
  const double delta = 1e-5;
  for (int i = 0; i < 300; ++i) {
    const double rho = rho_dist(rng);
    const double phi = phi_dist(rng);
    CHECK(interp_deriv2(phi) ==
          doctest::Approx(central_diff([](double s) { return interp_deriv(s); },
                                       phi, delta))
              .epsilon(1e-6));
    CHECK(double_well_deriv2(phi, p.a) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return double_well_deriv(s, p.a);
                              },
                              phi, delta))
              .epsilon(1e-6));
    CHECK(bulk_energy_d2rho(rho, p.vapor) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return bulk_energy_drho(s, p.vapor);
                              },
                              rho, delta))
              .epsilon(1e-6));
    CHECK(mixture_energy_d2rho(rho, phi, p) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return mixture_energy_drho(s, phi, p);
                              },
                              rho, delta))
              .epsilon(1e-6));
    CHECK(mixture_energy_drho_dphi(rho, phi, p) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return mixture_energy_drho(rho, s, p);
                              },
                              phi, delta))
              .epsilon(1e-6));
    CHECK(mixture_energy_d2phi(rho, phi, p) ==
          doctest::Approx(central_diff(
                              [&](double s) {
                                return mixture_energy_dphi(rho, s, p);
                              },
                              phi, delta))
              .epsilon(1e-6));
  }
}

TEST_CASE("quotients fall back to the analytic limit") {
  const MixtureParams p = study_params();
  const double rho_old = 1.3, rho_new = 1.9, phi = 0.37;
  const double expected = 0.5 * (mixture_energy_dphi(rho_new, phi, p) +
                                 mixture_energy_dphi(rho_old, phi, p));
  CHECK(mu_quotient(rho_old, rho_new, phi, phi, p) ==
        doctest::Approx(expected).epsilon(1e-13));

  const double rho = 1.1, phi_old = 0.2, phi_new = 0.8;
  const double expected_tau = 0.5 * (mixture_energy_drho(rho, phi_new, p) +
                                     mixture_energy_drho(rho, phi_old, p));
  CHECK(tau_quotient(rho, rho, phi_old, phi_new, p) ==
        doctest::Approx(expected_tau).epsilon(1e-13));
}

TEST_CASE("quotients reduce to plain difference quotients") {
  const MixtureParams p = study_params();
  // Equal densities: mu_quotient is the exact one-variable quotient.
  const double rho = 1.4, phi_old = 0.25, phi_new = 0.65;
  const double expected = (mixture_energy(rho, phi_new, p) -
                           mixture_energy(rho, phi_old, p)) /
                          (phi_new - phi_old);
  CHECK(mu_quotient(rho, rho, phi_old, phi_new, p) ==
        doctest::Approx(expected).epsilon(1e-12));

  // Equal phase values: tau_quotient is the exact rho-quotient.
  const double rho_old = 0.9, rho_new = 1.7, phi = 0.4;
  const double expected_tau = (mixture_energy(rho_new, phi, p) -
                               mixture_energy(rho_old, phi, p)) /
                              (rho_new - rho_old);
  CHECK(tau_quotient(rho_old, rho_new, phi, phi, p) ==
        doctest::Approx(expected_tau).epsilon(1e-12));
}

TEST_CASE("telescoping identity of the splitting quotients") {
  const MixtureParams p = study_params();
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> rho_dist(0.4, 2.6);
  std::uniform_real_distribution<double> phi_dist(-0.2, 1.2);
  for (int i = 0; i < 10000; ++i) {
    const double r0 = rho_dist(rng), r1 = rho_dist(rng);
    const double p0 = phi_dist(rng), p1 = phi_dist(rng);
    if (std::abs(r1 - r0) <= quotient_epsilon ||
        std::abs(p1 - p0) <= quotient_epsilon)
      continue;
    const double lhs = (p1 - p0) * mu_quotient(r0, r1, p0, p1, p) +
                       (r1 - r0) * tau_quotient(r0, r1, p0, p1, p);
    const double rhs = mixture_energy(r1, p1, p) - mixture_energy(r0, p0, p);
    const double scale = std::max({1.0, std::abs(mixture_energy(r1, p1, p)),
                                   std::abs(mixture_energy(r0, p0, p))});
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("quotients are continuous across the fallback switch") {
  // For the same state pair, the quotient branch and the removable-singularity
  // branch agree to O(increment^2).
  const MixtureParams p = study_params();
  const double rho_old = 1.2, rho_new = 1.5;
  const double phi0 = 0.42, phi1 = phi0 + 2.0 * quotient_epsilon;
  const double quotient = mu_quotient(rho_old, rho_new, phi0, phi1, p);
  const double phibar = 0.5 * (phi0 + phi1);
  const double limit = 0.5 * (mixture_energy_dphi(rho_new, phibar, p) +
                              mixture_energy_dphi(rho_old, phibar, p));
  CHECK(std::abs(quotient - limit) < 1e-10);

  const double r0 = 1.2, r1 = r0 + 2.0 * quotient_epsilon;
  const double pa = 0.1, pb = 0.4;
  const double tau_q = tau_quotient(r0, r1, pa, pb, p);
  const double rbar = 0.5 * (r0 + r1);
  const double tau_limit = 0.5 * (mixture_energy_drho(rbar, pb, p) +
                                  mixture_energy_drho(rbar, pa, p));
  CHECK(std::abs(tau_q - tau_limit) < 1e-10);
}

TEST_CASE("quotients converge to the analytic partials at second order") {
  const MixtureParams p = study_params();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> rho_dist(0.8, 2.0);
  std::uniform_real_distribution<double> phi_dist(0.1, 0.9);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double rho_bar = rho_dist(rng);
    const double phi_bar = phi_dist(rng);
    const double drho = dir(rng), dphi = dir(rng);
    if (std::abs(drho) < 0.1 || std::abs(dphi) < 0.1) continue;
    std::vector<double> log_s, log_err_mu, log_err_tau;
    for (double s : {0.08, 0.04, 0.02, 0.01, 0.005}) {
      const double r0 = rho_bar - 0.5 * s * drho;
      const double r1 = rho_bar + 0.5 * s * drho;
      const double p0 = phi_bar - 0.5 * s * dphi;
      const double p1 = phi_bar + 0.5 * s * dphi;
      const double err_mu = std::abs(mu_quotient(r0, r1, p0, p1, p) -
                                     mixture_energy_dphi(rho_bar, phi_bar, p));
      const double err_tau = std::abs(tau_quotient(r0, r1, p0, p1, p) -
                                      mixture_energy_drho(rho_bar, phi_bar, p));
      if (err_mu == 0.0 || err_tau == 0.0) break;
      log_s.push_back(std::log(s));
      log_err_mu.push_back(std::log(err_mu));
      log_err_tau.push_back(std::log(err_tau));
    }
    if (log_s.size() < 4) continue;
    auto slope = [&](const std::vector<double>& y) {
      const int n = static_cast<int>(log_s.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i = 0; i < n; ++i) {
        sx += log_s[i];
        sy += y[i];
        sxx += log_s[i] * log_s[i];
        sxy += log_s[i] * y[i];
      }
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    CHECK(slope(log_err_mu) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(slope(log_err_tau) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("quotients reject nonpositive densities") {
  const MixtureParams p = study_params();
  CHECK_THROWS_AS(mu_quotient(-0.5, 1.0, 0.1, 0.4, p), std::domain_error);
  CHECK_THROWS_AS(tau_quotient(1.0, 0.0, 0.1, 0.4, p), std::domain_error);
}

TEST_CASE("parameter validation") {
  MixtureParams p = study_params();
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = study_params();
  p.liquid.alpha = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
