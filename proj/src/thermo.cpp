#include "nsac/thermo.hpp"

#include <cmath>
#include <string>

namespace nsac {

namespace {

void require_positive_density(double rho, const char* who) {
  if (!(rho > 0.0)) {
    throw std::domain_error(std::string(who) +
                            ": density must be positive, got " +
                            std::to_string(rho));
  }
}

}  // namespace

void PhaseEOS::validate() const {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("PhaseEOS: alpha must be > 0");
  }
}

void MixtureParams::validate() const {
  liquid.validate();
  vapor.validate();
  if (!(a > 0.0)) throw std::invalid_argument("MixtureParams: a must be > 0");
  if (!(gamma > 0.0))
    throw std::invalid_argument("MixtureParams: gamma must be > 0");
  if (!(eta > 0.0))
    throw std::invalid_argument("MixtureParams: eta must be > 0");
  if (!(nu_liquid > 0.0) || !(nu_vapor > 0.0))
    throw std::invalid_argument("MixtureParams: viscosities must be > 0");
}

double interp(double phi) { return phi * phi * (3.0 - 2.0 * phi); }

double interp_deriv(double phi) { return 6.0 * phi * (1.0 - phi); }

double interp_deriv2(double phi) { return 6.0 - 12.0 * phi; }

double double_well(double phi, double a) {
  const double q = phi * (1.0 - phi);
  return a * q * q;
}

double double_well_deriv(double phi, double a) {
  return 2.0 * a * phi * (1.0 - phi) * (1.0 - 2.0 * phi);
}

double double_well_deriv2(double phi, double a) {
  return 2.0 * a * (1.0 - 6.0 * phi * (1.0 - phi));
}

double bulk_energy(double rho, const PhaseEOS& eos) {
  require_positive_density(rho, "bulk_energy");
  return eos.alpha * rho * std::log(rho) + (eos.beta - eos.alpha) * rho +
         eos.gamma_c;
}

double bulk_energy_drho(double rho, const PhaseEOS& eos) {
  require_positive_density(rho, "bulk_energy_drho");
  return eos.alpha * std::log(rho) + eos.beta;
}

double bulk_energy_d2rho(double rho, const PhaseEOS& eos) {
  require_positive_density(rho, "bulk_energy_d2rho");
  return eos.alpha / rho;
}

double mixture_energy(double rho, double phi, const MixtureParams& p) {
  const double h = interp(phi);
  return h * bulk_energy(rho, p.liquid) + (1.0 - h) * bulk_energy(rho, p.vapor) +
         double_well(phi, p.a) / p.gamma;
}

double mixture_energy_drho(double rho, double phi, const MixtureParams& p) {
  const double h = interp(phi);
  return h * bulk_energy_drho(rho, p.liquid) +
         (1.0 - h) * bulk_energy_drho(rho, p.vapor);
}

double mixture_energy_dphi(double rho, double phi, const MixtureParams& p) {
  return interp_deriv(phi) *
             (bulk_energy(rho, p.liquid) - bulk_energy(rho, p.vapor)) +
         double_well_deriv(phi, p.a) / p.gamma;
}

double mixture_energy_d2rho(double rho, double phi, const MixtureParams& p) {
  const double h = interp(phi);
  return h * bulk_energy_d2rho(rho, p.liquid) +
         (1.0 - h) * bulk_energy_d2rho(rho, p.vapor);
}

double mixture_energy_drho_dphi(double rho, double phi,
                                const MixtureParams& p) {
  return interp_deriv(phi) *
         (bulk_energy_drho(rho, p.liquid) - bulk_energy_drho(rho, p.vapor));
}

double mixture_energy_d2phi(double rho, double phi, const MixtureParams& p) {
  return interp_deriv2(phi) *
             (bulk_energy(rho, p.liquid) - bulk_energy(rho, p.vapor)) +
         double_well_deriv2(phi, p.a) / p.gamma;
}

double viscosity(double phi, const MixtureParams& p) {
  const double h = interp(phi);
  return h * p.nu_liquid + (1.0 - h) * p.nu_vapor;
}

double mu_quotient(double rho_old, double rho_new, double phi_old,
                   double phi_new, const MixtureParams& p) {
  require_positive_density(rho_old, "mu_quotient");
  require_positive_density(rho_new, "mu_quotient");
  if (std::abs(phi_new - phi_old) <= quotient_epsilon) {
    const double pb = 0.5 * (phi_old + phi_new);
    return 0.5 * (mixture_energy_dphi(rho_new, pb, p) +
                  mixture_energy_dphi(rho_old, pb, p));
  }
  // [h(p1)-h(p0)]/(p1-p0) and [W(p1)-W(p0)]/(p1-p0), factored exactly.
  const double dh = 3.0 * (phi_new + phi_old) -
                    2.0 * (phi_new * phi_new + phi_new * phi_old +
                           phi_old * phi_old);
  const double dw = p.a * (1.0 - (phi_new + phi_old)) *
                    (phi_new * (1.0 - phi_new) + phi_old * (1.0 - phi_old));
  const double g_new =
      bulk_energy(rho_new, p.liquid) - bulk_energy(rho_new, p.vapor);
  const double g_old =
      bulk_energy(rho_old, p.liquid) - bulk_energy(rho_old, p.vapor);
  return 0.5 * (g_new + g_old) * dh + dw / p.gamma;
}

double tau_quotient(double rho_old, double rho_new, double phi_old,
                    double phi_new, const MixtureParams& p) {
  require_positive_density(rho_old, "tau_quotient");
  require_positive_density(rho_new, "tau_quotient");
  if (std::abs(rho_new - rho_old) <= quotient_epsilon) {
    const double rb = 0.5 * (rho_old + rho_new);
    return 0.5 * (mixture_energy_drho(rb, phi_new, p) +
                  mixture_energy_drho(rb, phi_old, p));
  }
  // [r1 ln(r1) - r0 ln(r0)]/(r1-r0), evaluated without cancellation. The
  // gamma_c offsets drop out of the rho-difference identically.
  const double w = (rho_new - rho_old) / rho_old;
  const double dplnp =
      std::log(rho_old) + (rho_new / rho_old) * (std::log1p(w) / w);
  const double df_l = p.liquid.alpha * dplnp + (p.liquid.beta - p.liquid.alpha);
  const double df_v = p.vapor.alpha * dplnp + (p.vapor.beta - p.vapor.alpha);
  const double hm = 0.5 * (interp(phi_new) + interp(phi_old));
  return hm * df_l + (1.0 - hm) * df_v;
}

}  // namespace nsac
