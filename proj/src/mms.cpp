#include "nsac/mms.hpp"

#include <cmath>

namespace nsac {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ManufacturedSolution::ManufacturedSolution(MixtureParams params)
    : params_(std::move(params)) {
  params_.validate();
}

double ManufacturedSolution::rho(double x, double t) const {
  return 0.5 * std::cos(5.0 * kPi * t) * std::cos(2.0 * kPi * x) + 1.5;
}

double ManufacturedSolution::rho_t(double x, double t) const {
  return -2.5 * kPi * std::sin(5.0 * kPi * t) * std::cos(2.0 * kPi * x);
}

double ManufacturedSolution::rho_x(double x, double t) const {
  return -kPi * std::cos(5.0 * kPi * t) * std::sin(2.0 * kPi * x);
}

double ManufacturedSolution::v(double x, double t) const {
  return std::cos(5.0 * kPi * t) * std::cos(4.0 * kPi * x);
}

double ManufacturedSolution::v_t(double x, double t) const {
  return -5.0 * kPi * std::sin(5.0 * kPi * t) * std::cos(4.0 * kPi * x);
}

double ManufacturedSolution::v_x(double x, double t) const {
  return -4.0 * kPi * std::cos(5.0 * kPi * t) * std::sin(4.0 * kPi * x);
}

double ManufacturedSolution::v_xx(double x, double t) const {
  return -16.0 * kPi * kPi * std::cos(5.0 * kPi * t) * std::cos(4.0 * kPi * x);
}

double ManufacturedSolution::phi(double x, double t) const {
  return 0.5 * std::cos(5.0 * kPi * t) * std::cos(2.0 * kPi * x) + 0.5;
}

double ManufacturedSolution::phi_t(double x, double t) const {
  return -2.5 * kPi * std::sin(5.0 * kPi * t) * std::cos(2.0 * kPi * x);
}

double ManufacturedSolution::phi_x(double x, double t) const {
  return -kPi * std::cos(5.0 * kPi * t) * std::sin(2.0 * kPi * x);
}

double ManufacturedSolution::phi_xx(double x, double t) const {
  return -2.0 * kPi * kPi * std::cos(5.0 * kPi * t) * std::cos(2.0 * kPi * x);
}

double ManufacturedSolution::phi_xxx(double x, double t) const {
  return 4.0 * kPi * kPi * kPi * std::cos(5.0 * kPi * t) *
         std::sin(2.0 * kPi * x);
}

double ManufacturedSolution::mu(double x, double t) const {
  return mixture_energy_dphi(rho(x, t), phi(x, t), params_) -
         params_.gamma * phi_xx(x, t);
}

double ManufacturedSolution::tau(double x, double t) const {
  const double vv = v(x, t);
  return mixture_energy_drho(rho(x, t), phi(x, t), params_) + 0.5 * vv * vv;
}

ExactState ManufacturedSolution::exact(double x, double t) const {
  return {rho(x, t), v(x, t),   phi(x, t),
          mu(x, t),  tau(x, t), sigma(x, t)};
}

SourceValues ManufacturedSolution::sources(double x, double t) const {
  const double r = rho(x, t), rx = rho_x(x, t), rt = rho_t(x, t);
  const double w = v(x, t), wx = v_x(x, t), wxx = v_xx(x, t), wt = v_t(x, t);
  const double p = phi(x, t), px = phi_x(x, t), pt = phi_t(x, t);

  SourceValues s;
  s.rho = rt + rx * w + r * wx;

  const double tau_x = mixture_energy_d2rho(r, p, params_) * rx +
                       mixture_energy_drho_dphi(r, p, params_) * px + w * wx;
  const double convective = (rx * w * w + 2.0 * r * w * wx)  // (rho v^2)'
                            - (rx * w + r * wx) * w          // -(rho v)' v
                            - r * w * wx;                    // -rho (v^2)'/2
  const double stress_x =
      interp_deriv(p) * (params_.nu_liquid - params_.nu_vapor) * px * wx +
      viscosity(p, params_) * wxx;
  s.v = r * wt + convective + r * tau_x - mu(x, t) * px - stress_x;

  s.phi = pt + px * w + params_.eta * mu(x, t) / r;
  return s;
}

SourceTerms ManufacturedSolution::source_terms() const {
  SourceTerms st;
  st.rho = [*this](double x, double t) { return sources(x, t).rho; };
  st.v = [*this](double x, double t) { return sources(x, t).v; };
  st.phi = [*this](double x, double t) { return sources(x, t).phi; };
  return st;
}

BoundarySchedule ManufacturedSolution::boundary() const {
  BoundarySchedule bc;
  bc.v_left = [*this](double t) { return v(0.0, t); };
  bc.v_right = [*this](double t) { return v(1.0, t); };
  return bc;
}

InitialData ManufacturedSolution::initial() const {
  InitialData init;
  init.rho0 = [*this](double x) { return rho(x, 0.0); };
  init.v0 = [*this](double x) { return v(x, 0.0); };
  init.phi0 = [*this](double x) { return phi(x, 0.0); };
  init.dphi0 = [*this](double x) { return phi_x(x, 0.0); };
  init.d2phi0 = [*this](double x) { return phi_xx(x, 0.0); };
  return init;
}

}  // namespace nsac
