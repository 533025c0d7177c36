#pragma once

#include <stdexcept>

namespace nsac {

/// Stiffened-gas bulk free energy density
///   rho*f(rho) = alpha*rho*ln(rho) + (beta - alpha)*rho + gamma_c.
struct PhaseEOS {
  double alpha = 1.0;   // must be > 0 so rho*f is convex for rho > 0
  double beta = 0.0;
  double gamma_c = 0.0; // cancels in all derivatives but shifts absolute energies
  void validate() const;
};

struct MixtureParams {
  PhaseEOS liquid;
  PhaseEOS vapor;
  double a = 0.1;          // double-well height
  double gamma = 1e-3;     // capillarity parameter (interface width scale)
  double eta = 1.0;        // phase-field mobility
  double nu_liquid = 1e-3; // shear viscosities of the pure phases
  double nu_vapor = 1e-3;
  void validate() const;
};

// Smoothstep interpolation between the phases: h(0)=0, h(1)=1, h'(0)=h'(1)=0.
double interp(double phi);
double interp_deriv(double phi);
double interp_deriv2(double phi);

// Double well a*phi^2*(1-phi)^2 with minima at 0 and 1.
double double_well(double phi, double a);
double double_well_deriv(double phi, double a);
double double_well_deriv2(double phi, double a);

// Bulk energy rho*f(rho) and its rho-derivatives. Throws std::domain_error
// for rho <= 0.
double bulk_energy(double rho, const PhaseEOS& eos);
double bulk_energy_drho(double rho, const PhaseEOS& eos);
double bulk_energy_d2rho(double rho, const PhaseEOS& eos);

// Homogeneous mixture energy
//   rho*ftilde(rho,phi) = h(phi)*rho f_L(rho) + (1-h(phi))*rho f_V(rho) + W(phi)/gamma
// and its partial derivatives up to second order.
double mixture_energy(double rho, double phi, const MixtureParams& p);
double mixture_energy_drho(double rho, double phi, const MixtureParams& p);
double mixture_energy_dphi(double rho, double phi, const MixtureParams& p);
double mixture_energy_d2rho(double rho, double phi, const MixtureParams& p);
double mixture_energy_drho_dphi(double rho, double phi, const MixtureParams& p);
double mixture_energy_d2phi(double rho, double phi, const MixtureParams& p);

// Interpolated viscosity nu(phi) = h(phi)*nu_L + (1-h(phi))*nu_V.
double viscosity(double phi, const MixtureParams& p);

// Increment threshold below which the difference quotients switch to their
// removable-singularity limit.
inline constexpr double quotient_epsilon = 1e-8;

// Symmetric difference quotients of the mixture energy that make the discrete
// free energy telescope exactly over a time step:
//
//   mu_quotient  = [r1 F(r1,p1) - r1 F(r1,p0) + r0 F(r0,p1) - r0 F(r0,p0)] / (2 (p1-p0))
//   tau_quotient = [r1 F(r1,p1) - r0 F(r0,p1) + r1 F(r1,p0) - r0 F(r0,p0)] / (2 (r1-r0))
//
// with F = ftilde. Evaluated through factored divided differences that are
// algebraically identical to the ratios above but avoid cancellation when the
// increments are small. Below quotient_epsilon the exact limit (the average of
// the analytic partials at the midpoint) is returned instead.
double mu_quotient(double rho_old, double rho_new, double phi_old,
                   double phi_new, const MixtureParams& p);
double tau_quotient(double rho_old, double rho_new, double phi_old,
                    double phi_new, const MixtureParams& p);

}  // namespace nsac
