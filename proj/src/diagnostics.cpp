#include "nsac/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace nsac {

double total_mass(const DGField& rho) { return integrate(rho); }

double discrete_energy(const StateVector& U, const MixtureParams& p) {
  const Basis& b = U.basis();
  const Mesh1D& mesh = U.mesh();
  const int nn = b.n_nodes();
  const int nq = b.n_quad();
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double hc = mesh.size(c);
    for (int q = 0; q < nq; ++q) {
      const double* bv = &b.val_at_quad[q * nn];
      double rho = 0.0, v = 0.0, phi = 0.0, sig = 0.0;
      for (int j = 0; j < nn; ++j) {
        rho += U.rho.cell(c)[j] * bv[j];
        v += U.v.cell(c)[j] * bv[j];
        phi += U.phi.cell(c)[j] * bv[j];
        sig += U.sigma.cell(c)[j] * bv[j];
      }
      const double integrand = mixture_energy(rho, phi, p) +
                               0.5 * p.gamma * sig * sig + 0.5 * rho * v * v;
      acc += 0.5 * hc * b.quad.weights[q] * integrand;
    }
  }
  return acc;
}

namespace {

DGField midpoint_field(const DGField& a, const DGField& b) {
  DGField m = a;
  for (size_t i = 0; i < m.coeff.size(); ++i)
    m.coeff[i] = 0.5 * (a.coeff[i] + b.coeff[i]);
  return m;
}

}  // namespace

DissipationBreakdown dissipation_terms(const StateVector& U_old,
                                       const StateVector& U_new,
                                       const MixtureParams& p,
                                       const FluxParams& fp,
                                       const BoundaryValues& bc_mid) {
  DissipationBreakdown out;
  const Basis& b = U_old.basis();
  const Mesh1D& mesh = U_old.mesh();
  const int nn = b.n_nodes();
  const int nq = b.n_quad();

  const DGField v_mid = midpoint_field(U_old.v, U_new.v);
  const DGField phi_mid = midpoint_field(U_old.phi, U_new.phi);
  const DGField mu_mid = midpoint_field(U_old.mu, U_new.mu);
  const DGField tau_mid = midpoint_field(U_old.tau, U_new.tau);
  const DGField rho_mid = midpoint_field(U_old.rho, U_new.rho);

  out.viscous = viscous_form(phi_mid, v_mid, v_mid, p, fp.alphaB,
                             bc_mid.v_left, bc_mid.v_right);

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double hc = mesh.size(c);
    for (int q = 0; q < nq; ++q) {
      const double* bv = &b.val_at_quad[q * nn];
      double rho = 0.0, mu = 0.0;
      for (int j = 0; j < nn; ++j) {
        rho += rho_mid.cell(c)[j] * bv[j];
        mu += mu_mid.cell(c)[j] * bv[j];
      }
      out.mobility += 0.5 * hc * b.quad.weights[q] * p.eta * mu * mu / rho;
    }
  }

  for (int f = 1; f < mesh.n_cells(); ++f) {
    const double jt = tau_mid.trace_right(f - 1) - tau_mid.trace_left(f);
    const double jv = v_mid.trace_right(f - 1) - v_mid.trace_left(f);
    const double jm = mu_mid.trace_right(f - 1) - mu_mid.trace_left(f);
    out.stab[0] += fp.alpha1 * jt * jt;
    out.stab[1] += fp.alpha2 * jv * jv;
    out.stab[2] += fp.alpha3 * jm * jm;
  }
  return out;
}

double energy_balance_residual(const StateVector& U_old,
                               const StateVector& U_new, double dt,
                               const MixtureParams& p, const FluxParams& fp,
                               const BoundaryValues& bc_mid) {
  const DissipationBreakdown d = dissipation_terms(U_old, U_new, p, fp, bc_mid);
  return discrete_energy(U_new, p) - discrete_energy(U_old, p) +
         dt * (d.viscous + d.mobility + d.stab[0] + d.stab[1] + d.stab[2]);
}

StepDiagnostics step_diagnostics(const StateVector& U_old,
                                 const StateVector& U_new, double t_new,
                                 double dt, const MixtureParams& p,
                                 const FluxParams& fp,
                                 const BoundaryValues& bc_mid) {
  StepDiagnostics s;
  s.time = t_new;
  s.total_mass = total_mass(U_new.rho);
  s.energy = discrete_energy(U_new, p);
  const DissipationBreakdown d = dissipation_terms(U_old, U_new, p, fp, bc_mid);
  s.visc_dissipation = d.viscous;
  s.mobility_dissipation = d.mobility;
  s.stab_dissipation = d.stab;
  s.energy_balance_residual =
      s.energy - discrete_energy(U_old, p) +
      dt * (d.viscous + d.mobility + d.stab[0] + d.stab[1] + d.stab[2]);
  return s;
}

std::vector<double> compute_eoc(std::span<const double> errors,
                                std::span<const double> resolutions) {
  if (errors.size() != resolutions.size() || errors.size() < 2)
    throw std::invalid_argument("compute_eoc: need matching sequences >= 2");
  for (double e : errors)
    if (!(e > 0.0))
      throw std::invalid_argument("compute_eoc: errors must be positive");
  for (double r : resolutions)
    if (!(r > 0.0))
      throw std::invalid_argument("compute_eoc: resolutions must be positive");
  std::vector<double> rates;
  rates.reserve(errors.size() - 1);
  for (size_t i = 1; i < errors.size(); ++i)
    rates.push_back(std::log(errors[i - 1] / errors[i]) /
                    std::log(resolutions[i] / resolutions[i - 1]));
  return rates;
}

double linf_of(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("linf_of: empty series");
  double m = samples[0];
  for (double s : samples) m = std::max(m, s);
  return m;
}

}  // namespace nsac
