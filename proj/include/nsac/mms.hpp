#pragma once

#include "nsac/spatial.hpp"
#include "nsac/stepper.hpp"
#include "nsac/thermo.hpp"

namespace nsac {

struct ExactState {
  double rho, v, phi, mu, tau, sigma;
};

struct SourceValues {
  double rho, v, phi;
};

/// Closed-form space-time solution used for convergence studies:
///   rho = cos(5 pi t) cos(2 pi x)/2 + 3/2   (stays in [1,2])
///   v   = cos(5 pi t) cos(4 pi x)
///   phi = cos(5 pi t) cos(2 pi x)/2 + 1/2   (stays in [0,1])
/// together with the induced sigma/mu/tau fields and the source terms that
/// make the triple satisfy the mixed system. The boundary velocity equals
/// cos(5 pi t) at both walls; the exact sigma trace vanishes there.
class ManufacturedSolution {
 public:
  explicit ManufacturedSolution(MixtureParams params);

  double rho(double x, double t) const;
  double rho_t(double x, double t) const;
  double rho_x(double x, double t) const;
  double v(double x, double t) const;
  double v_t(double x, double t) const;
  double v_x(double x, double t) const;
  double v_xx(double x, double t) const;
  double phi(double x, double t) const;
  double phi_t(double x, double t) const;
  double phi_x(double x, double t) const;
  double phi_xx(double x, double t) const;
  double phi_xxx(double x, double t) const;

  double mu(double x, double t) const;
  double tau(double x, double t) const;
  double sigma(double x, double t) const { return phi_x(x, t); }

  ExactState exact(double x, double t) const;

  // Residuals of the density, momentum and phase-field rows of the mixed
  // system on the exact solution (closed forms; validated in the tests
  // against a nested finite-difference oracle).
  SourceValues sources(double x, double t) const;

  SourceTerms source_terms() const;
  BoundarySchedule boundary() const;
  InitialData initial() const;

  const MixtureParams& params() const { return params_; }

 private:
  MixtureParams params_;
};

}  // namespace nsac
