#pragma once

#include <functional>
#include <span>
#include <utility>

#include "nsac/errors.hpp"
#include "nsac/linalg.hpp"
#include "nsac/mesh.hpp"
#include "nsac/thermo.hpp"

namespace nsac {

struct FluxParams {
  double alphaB = 0.0;  // interior-penalty coefficient of the viscous form
  double alpha1 = 0.0;  // tau-jump stabilization in the density equation
  double alpha2 = 0.0;  // v-jump stabilization in the momentum equation
  double alpha3 = 0.0;  // mu-jump stabilization in the phase-field equation
  void validate() const;
};

/// The six-field discrete unknown (rho, v, phi, mu, tau, sigma) at one time
/// level. All components share one mesh and basis.
struct StateVector {
  DGField rho, v, phi, mu, tau, sigma;

  StateVector() = default;
  StateVector(const Mesh1D& m, const Basis& b);

  static constexpr int n_fields = 6;
  enum Field { RHO = 0, V = 1, PHI = 2, MU = 3, TAU = 4, SIGMA = 5 };

  DGField& field(int i);
  const DGField& field(int i) const;

  const Mesh1D& mesh() const { return *rho.mesh; }
  const Basis& basis() const { return *rho.basis; }
  int n_dof() const;

  // Flat layout: cell-major blocks of 6*(degree+1), fields in enum order.
  void to_vector(std::span<double> out) const;
  void from_vector(std::span<const double> in);

  // Minimum of rho over all quadrature points and traces, with its location.
  std::pair<double, double> min_density() const;
};

struct BoundaryValues {
  double v_left = 0.0, v_right = 0.0;
  double sigma_left = 0.0, sigma_right = 0.0;
};

/// Manufactured source terms S(x, t) for the density, momentum and
/// phase-field equations.
struct SourceTerms {
  std::function<double(double, double)> rho, v, phi;
};

/// SIPG form for the viscous stress: volume term int nu(phi) v' x' plus the
/// symmetric consistency terms and the alphaB/|e| penalty on all faces. The
/// face measure |e| is the mean adjacent cell size. g_* supply Dirichlet data
/// for v entering the boundary faces (the test function carries none).
double viscous_form(const DGField& phi, const DGField& v, const DGField& x,
                    const MixtureParams& mp, double alphaB,
                    double g_left = 0.0, double g_right = 0.0);

/// Interior-face flux functional of equation `slot` (1..6) applied to a test
/// field:
///   F1 = -[[rho v]]{psi} + alpha1 [[tau]].[[psi]]
///   F2 = -[[tau]].{rho X} + [[phi]].{mu X} + alpha2 [[v]][[X]]
///   F3 = -[[phi]].{Theta v} + alpha3 [[mu]].[[Theta]]
///   F4 = -gamma [[sigma]]{chi},  F5 = 0,  F6 = [[phi]].{Z}
/// All vanish identically on globally continuous states.
double flux_terms(const StateVector& U, int slot, const DGField& test,
                  const FluxParams& fp, const MixtureParams& mp);

/// Assembles the Galerkin residual of the fully-discrete system for the step
/// U_old -> U_new over dt. Midpoint fields (coefficient averages) enter every
/// equation except the sigma identity and its face term, which use the new
/// time level. The mu/tau equations use the splitting quotients pointwise at
/// quadrature points. Optional sources are evaluated at t_old + dt/2.
///
/// Rows follow the StateVector flat layout. For degree >= 1 the endpoint rows
/// of v and sigma are replaced by strong Dirichlet pins against bc_new;
/// bc_mid supplies the Dirichlet data of the viscous boundary terms.
class ResidualAssembler {
 public:
  ResidualAssembler(const Mesh1D& mesh, const Basis& basis, MixtureParams mp,
                    FluxParams fp);

  void assemble(const StateVector& U_old, const StateVector& U_new,
                double t_old, double dt, const BoundaryValues& bc_new,
                const BoundaryValues& bc_mid, const SourceTerms* sources,
                std::span<double> out) const;

  // Forward-difference Jacobian with respect to U_new, probed in cell colors
  // chosen so that probe stencils never overlap (the residual couples only
  // nearest-neighbor cells, wrapping around on periodic meshes). U_probe must
  // equal U_new on entry and is restored before returning.
  void fd_jacobian(const StateVector& U_old, StateVector& U_probe,
                   double t_old, double dt, const BoundaryValues& bc_new,
                   const BoundaryValues& bc_mid, const SourceTerms* sources,
                   std::span<const double> base_residual,
                   RingBlockMatrix& jac) const;

  const Mesh1D& mesh() const { return *mesh_; }
  const Basis& basis() const { return *basis_; }
  const MixtureParams& params() const { return mp_; }
  const FluxParams& flux_params() const { return fp_; }
  int n_dof() const;
  int block_size() const { return StateVector::n_fields * basis_->n_nodes(); }

 private:
  const Mesh1D* mesh_;
  const Basis* basis_;
  MixtureParams mp_;
  FluxParams fp_;
};

}  // namespace nsac
