#include "nsac/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsac {

void FluxParams::validate() const {
  if (alphaB < 0.0 || alpha1 < 0.0 || alpha2 < 0.0 || alpha3 < 0.0)
    throw std::invalid_argument("FluxParams: coefficients must be >= 0");
}

StateVector::StateVector(const Mesh1D& m, const Basis& b)
    : rho(m, b), v(m, b), phi(m, b), mu(m, b), tau(m, b), sigma(m, b) {}

DGField& StateVector::field(int i) {
  switch (i) {
    case RHO: return rho;
    case V: return v;
    case PHI: return phi;
    case MU: return mu;
    case TAU: return tau;
    case SIGMA: return sigma;
  }
  throw std::out_of_range("StateVector::field");
}

const DGField& StateVector::field(int i) const {
  return const_cast<StateVector*>(this)->field(i);
}

int StateVector::n_dof() const {
  return n_fields * rho.n_cells() * rho.basis->n_nodes();
}

void StateVector::to_vector(std::span<double> out) const {
  const int nn = rho.basis->n_nodes();
  const int nc = rho.n_cells();
  for (int c = 0; c < nc; ++c)
    for (int f = 0; f < n_fields; ++f) {
      const double* src = field(f).cell(c);
      double* dst = out.data() + (c * n_fields + f) * nn;
      std::copy(src, src + nn, dst);
    }
}

void StateVector::from_vector(std::span<const double> in) {
  const int nn = rho.basis->n_nodes();
  const int nc = rho.n_cells();
  for (int c = 0; c < nc; ++c)
    for (int f = 0; f < n_fields; ++f) {
      const double* src = in.data() + (c * n_fields + f) * nn;
      std::copy(src, src + nn, field(f).cell(c));
    }
}

std::pair<double, double> StateVector::min_density() const {
  const Basis& b = *rho.basis;
  const Mesh1D& m = *rho.mesh;
  const int nn = b.n_nodes();
  const int nq = b.n_quad();
  double best = std::numeric_limits<double>::infinity();
  double where = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    const double* rc = rho.cell(c);
    for (int q = 0; q < nq; ++q) {
      const double* vq = &b.val_at_quad[q * nn];
      double r = 0.0;
      for (int j = 0; j < nn; ++j) r += rc[j] * vq[j];
      if (r < best) {
        best = r;
        where = m.left(c) + 0.5 * (b.quad.points[q] + 1.0) * m.size(c);
      }
    }
    const double tl = rho.trace_left(c), tr = rho.trace_right(c);
    if (tl < best) { best = tl; where = m.left(c); }
    if (tr < best) { best = tr; where = m.right(c); }
  }
  return {best, where};
}

double viscous_form(const DGField& phi, const DGField& v, const DGField& x,
                    const MixtureParams& mp, double alphaB, double g_left,
                    double g_right) {
  if (phi.mesh != v.mesh || v.mesh != x.mesh || phi.basis != v.basis ||
      v.basis != x.basis)
    throw std::invalid_argument("viscous_form: mismatched fields");
  const Mesh1D& mesh = *v.mesh;
  const Basis& b = *v.basis;
  const int nn = b.n_nodes();
  const int nq = b.n_quad();

  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double hc = mesh.size(c);
    const double jac = 2.0 / hc;
    for (int q = 0; q < nq; ++q) {
      const double* val = &b.val_at_quad[q * nn];
      const double* der = &b.der_at_quad[q * nn];
      double p = 0.0, dv = 0.0, dx = 0.0;
      for (int j = 0; j < nn; ++j) {
        p += phi.cell(c)[j] * val[j];
        dv += v.cell(c)[j] * der[j];
        dx += x.cell(c)[j] * der[j];
      }
      acc += 0.5 * hc * b.quad.weights[q] * viscosity(p, mp) *
             (dv * jac) * (dx * jac);
    }
  }
  auto interior_face = [&](int cl, int cr) {
    const double nu_l = viscosity(phi.trace_right(cl), mp);
    const double nu_r = viscosity(phi.trace_left(cr), mp);
    const double sv = 0.5 * (nu_l * v.deriv_trace_right(cl) +
                             nu_r * v.deriv_trace_left(cr));
    const double sx = 0.5 * (nu_l * x.deriv_trace_right(cl) +
                             nu_r * x.deriv_trace_left(cr));
    const double jv = v.trace_right(cl) - v.trace_left(cr);
    const double jx = x.trace_right(cl) - x.trace_left(cr);
    const double e = 0.5 * (mesh.size(cl) + mesh.size(cr));
    acc += -(sv * jx + sx * jv) + (alphaB / e) * jv * jx;
  };
  for (int f = 1; f < mesh.n_cells(); ++f) interior_face(f - 1, f);
  if (mesh.periodic) {
    interior_face(mesh.n_cells() - 1, 0);
    return acc;
  }
  // Boundary faces: v carries the Dirichlet lift, the test function does not.
  {
    const int c = 0;
    const double n = -1.0;
    const double nu = viscosity(phi.trace_left(c), mp);
    const double sv = nu * v.deriv_trace_left(c);
    const double sx = nu * x.deriv_trace_left(c);
    const double jv = (v.trace_left(c) - g_left) * n;
    const double jx = x.trace_left(c) * n;
    acc += -(sv * jx + sx * jv) + (alphaB / mesh.size(c)) * jv * jx;
  }
  {
    const int c = mesh.n_cells() - 1;
    const double n = 1.0;
    const double nu = viscosity(phi.trace_right(c), mp);
    const double sv = nu * v.deriv_trace_right(c);
    const double sx = nu * x.deriv_trace_right(c);
    const double jv = (v.trace_right(c) - g_right) * n;
    const double jx = x.trace_right(c) * n;
    acc += -(sv * jx + sx * jv) + (alphaB / mesh.size(c)) * jv * jx;
  }
  return acc;
}

double flux_terms(const StateVector& U, int slot, const DGField& test,
                  const FluxParams& fp, const MixtureParams& mp) {
  if (slot < 1 || slot > 6)
    throw std::invalid_argument("flux_terms: slot must be in 1..6");
  if (test.mesh != U.rho.mesh || test.basis != U.rho.basis)
    throw std::invalid_argument("flux_terms: mismatched test field");
  const Mesh1D& mesh = U.mesh();
  double acc = 0.0;
  auto one_face = [&](int cl, int cr) {
    const double tl = test.trace_right(cl), tr = test.trace_left(cr);
    const double t_avg = 0.5 * (tl + tr);
    const double t_jump = tl - tr;
    switch (slot) {
      case 1: {
        const double jump_rv = U.rho.trace_right(cl) * U.v.trace_right(cl) -
                               U.rho.trace_left(cr) * U.v.trace_left(cr);
        const double jump_tau = U.tau.trace_right(cl) - U.tau.trace_left(cr);
        acc += -jump_rv * t_avg + fp.alpha1 * jump_tau * t_jump;
        break;
      }
      case 2: {
        const double jump_tau = U.tau.trace_right(cl) - U.tau.trace_left(cr);
        const double jump_phi = U.phi.trace_right(cl) - U.phi.trace_left(cr);
        const double jump_v = U.v.trace_right(cl) - U.v.trace_left(cr);
        const double avg_rho_x =
            0.5 * (U.rho.trace_right(cl) * tl + U.rho.trace_left(cr) * tr);
        const double avg_mu_x =
            0.5 * (U.mu.trace_right(cl) * tl + U.mu.trace_left(cr) * tr);
        acc += -jump_tau * avg_rho_x + jump_phi * avg_mu_x +
               fp.alpha2 * jump_v * t_jump;
        break;
      }
      case 3: {
        const double jump_phi = U.phi.trace_right(cl) - U.phi.trace_left(cr);
        const double jump_mu = U.mu.trace_right(cl) - U.mu.trace_left(cr);
        const double avg_t_v =
            0.5 * (tl * U.v.trace_right(cl) + tr * U.v.trace_left(cr));
        acc += -jump_phi * avg_t_v + fp.alpha3 * jump_mu * t_jump;
        break;
      }
      case 4: {
        const double jump_sig =
            U.sigma.trace_right(cl) - U.sigma.trace_left(cr);
        acc += -mp.gamma * jump_sig * t_avg;
        break;
      }
      case 5:
        break;
      case 6: {
        const double jump_phi = U.phi.trace_right(cl) - U.phi.trace_left(cr);
        acc += jump_phi * t_avg;
        break;
      }
    }
  };
  for (int f = 1; f < mesh.n_cells(); ++f) one_face(f - 1, f);
  if (mesh.periodic) one_face(mesh.n_cells() - 1, 0);
  return acc;
}

ResidualAssembler::ResidualAssembler(const Mesh1D& mesh, const Basis& basis,
                                     MixtureParams mp, FluxParams fp)
    : mesh_(&mesh), basis_(&basis), mp_(std::move(mp)), fp_(std::move(fp)) {
  mp_.validate();
  fp_.validate();
}

int ResidualAssembler::n_dof() const {
  return StateVector::n_fields * mesh_->n_cells() * basis_->n_nodes();
}

namespace {

struct CellEval {
  // Values and x-derivatives of a field at one quadrature point.
  double val[12];
  double der[12];
};

inline double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void ResidualAssembler::assemble(const StateVector& U_old,
                                 const StateVector& U_new, double t_old,
                                 double dt, const BoundaryValues& bc_new,
                                 const BoundaryValues& bc_mid,
                                 const SourceTerms* sources,
                                 std::span<double> out) const {
  if (!(dt > 0.0)) throw std::invalid_argument("assemble: dt must be > 0");
  if (U_old.rho.mesh != mesh_ || U_new.rho.mesh != mesh_ ||
      U_old.rho.basis != basis_ || U_new.rho.basis != basis_)
    throw std::invalid_argument("assemble: state not on assembler mesh/basis");
  const int nn = basis_->n_nodes();
  const int nq = basis_->n_quad();
  const int nc = mesh_->n_cells();
  const int m = StateVector::n_fields * nn;
  if (static_cast<int>(out.size()) != nc * m)
    throw std::invalid_argument("assemble: wrong residual size");
  std::fill(out.begin(), out.end(), 0.0);

  const double t_mid = t_old + 0.5 * dt;
  const double gamma = mp_.gamma;
  const double eta = mp_.eta;

  // Field pointers per cell: slots 0..5 old, 6..11 new.
  const DGField* fields[12] = {&U_old.rho, &U_old.v,   &U_old.phi, &U_old.mu,
                               &U_old.tau, &U_old.sigma, &U_new.rho, &U_new.v,
                               &U_new.phi, &U_new.mu,  &U_new.tau, &U_new.sigma};

  for (int c = 0; c < nc; ++c) {
    const double hc = mesh_->size(c);
    const double jac = 2.0 / hc;
    const double xl = mesh_->left(c);
    const double* coef[12];
    for (int f = 0; f < 12; ++f) coef[f] = fields[f]->cell(c);

    for (int q = 0; q < nq; ++q) {
      const double* bval = &basis_->val_at_quad[q * nn];
      const double* bder = &basis_->der_at_quad[q * nn];
      CellEval e;
      for (int f = 0; f < 12; ++f) {
        e.val[f] = dot(coef[f], bval, nn);
        e.der[f] = dot(coef[f], bder, nn) * jac;
      }
      const double x = xl + 0.5 * (basis_->quad.points[q] + 1.0) * hc;
      const double rho_o = e.val[0], rho_n = e.val[6];
      if (!(rho_o > 0.0)) throw DensityPositivityError(x);
      if (!(rho_n > 0.0)) throw DensityPositivityError(x);
      const double v_o = e.val[1], v_n = e.val[7];
      const double phi_o = e.val[2], phi_n = e.val[8];

      const double rm = 0.5 * (rho_o + rho_n);
      const double vm = 0.5 * (v_o + v_n);
      const double pm = 0.5 * (phi_o + phi_n);
      const double mum = 0.5 * (e.val[3] + e.val[9]);
      const double taum = 0.5 * (e.val[4] + e.val[10]);
      const double d_rm = 0.5 * (e.der[0] + e.der[6]);
      const double d_vm = 0.5 * (e.der[1] + e.der[7]);
      const double d_pm = 0.5 * (e.der[2] + e.der[8]);
      const double d_taum = 0.5 * (e.der[4] + e.der[10]);
      const double d_sigm = 0.5 * (e.der[5] + e.der[11]);

      const double div_rv = d_rm * vm + rm * d_vm;
      double i_rho = (rho_n - rho_o) / dt + div_rv;
      double i_v = rm * (v_n - v_o) / dt
                   // convective block of the non-conservative momentum form
                   + (d_rm * vm * vm + 2.0 * rm * vm * d_vm)  // div(rho v v)
                   - div_rv * vm                              // -div(rho v) v
                   - rm * vm * d_vm                           // -rho/2 (v^2)'
                   + rm * d_taum - mum * d_pm;
      double i_phi = (phi_n - phi_o) / dt + d_pm * vm + eta * mum / rm;
      const double i_mu =
          mum - mu_quotient(rho_o, rho_n, phi_o, phi_n, mp_) + gamma * d_sigm;
      const double i_tau = taum - tau_quotient(rho_o, rho_n, phi_o, phi_n, mp_) -
                           0.25 * (v_n * v_n + v_o * v_o);
      const double i_sigma = e.val[11] - e.der[8];  // sigma and phi at t_{n+1}

      if (sources) {
        i_rho -= sources->rho(x, t_mid);
        i_v -= sources->v(x, t_mid);
        i_phi -= sources->phi(x, t_mid);
      }

      const double w = 0.5 * hc * basis_->quad.weights[q];
      const double visc = viscosity(pm, mp_) * d_vm;
      double* block = out.data() + c * m;
      for (int j = 0; j < nn; ++j) {
        const double bj = w * bval[j];
        block[StateVector::RHO * nn + j] += i_rho * bj;
        block[StateVector::V * nn + j] += i_v * bj + w * visc * bder[j] * jac;
        block[StateVector::PHI * nn + j] += i_phi * bj;
        block[StateVector::MU * nn + j] += i_mu * bj;
        block[StateVector::TAU * nn + j] += i_tau * bj;
        block[StateVector::SIGMA * nn + j] += i_sigma * bj;
      }
    }
  }

  const double* tl = basis_->trace_left.data();
  const double* tr = basis_->trace_right.data();
  const double* dtl = basis_->dtrace_left.data();
  const double* dtr = basis_->dtrace_right.data();

  auto mid_trace_r = [&](const DGField& fo, const DGField& fn, int c) {
    return 0.5 * (fo.trace_right(c) + fn.trace_right(c));
  };
  auto mid_trace_l = [&](const DGField& fo, const DGField& fn, int c) {
    return 0.5 * (fo.trace_left(c) + fn.trace_left(c));
  };

  auto interior_face = [&](int cl, int cr) {
    const double hl = mesh_->size(cl), hr = mesh_->size(cr);
    const double rho_l = mid_trace_r(U_old.rho, U_new.rho, cl);
    const double rho_r = mid_trace_l(U_old.rho, U_new.rho, cr);
    const double v_l = mid_trace_r(U_old.v, U_new.v, cl);
    const double v_r = mid_trace_l(U_old.v, U_new.v, cr);
    const double phi_l = mid_trace_r(U_old.phi, U_new.phi, cl);
    const double phi_r = mid_trace_l(U_old.phi, U_new.phi, cr);
    const double mu_l = mid_trace_r(U_old.mu, U_new.mu, cl);
    const double mu_r = mid_trace_l(U_old.mu, U_new.mu, cr);
    const double tau_l = mid_trace_r(U_old.tau, U_new.tau, cl);
    const double tau_r = mid_trace_l(U_old.tau, U_new.tau, cr);
    const double sig_l = mid_trace_r(U_old.sigma, U_new.sigma, cl);
    const double sig_r = mid_trace_l(U_old.sigma, U_new.sigma, cr);
    const double phin_l = U_new.phi.trace_right(cl);
    const double phin_r = U_new.phi.trace_left(cr);

    const double jump_rv = rho_l * v_l - rho_r * v_r;
    const double jump_tau = tau_l - tau_r;
    const double jump_phi = phi_l - phi_r;
    const double jump_v = v_l - v_r;
    const double jump_mu = mu_l - mu_r;
    const double jump_sig = sig_l - sig_r;
    const double jump_phin = phin_l - phin_r;

    // Viscous face data (one-sided stresses of the midpoint velocity).
    const double nu_l = viscosity(phi_l, mp_);
    const double nu_r = viscosity(phi_r, mp_);
    const double dv_l = 0.5 * (U_old.v.deriv_trace_right(cl) +
                               U_new.v.deriv_trace_right(cl));
    const double dv_r = 0.5 * (U_old.v.deriv_trace_left(cr) +
                               U_new.v.deriv_trace_left(cr));
    const double s_avg = 0.5 * (nu_l * dv_l + nu_r * dv_r);
    const double e_len = 0.5 * (hl + hr);

    double* bl = out.data() + cl * m;
    double* br = out.data() + cr * m;
    for (int j = 0; j < nn; ++j) {
      // Density equation.
      bl[StateVector::RHO * nn + j] +=
          -jump_rv * 0.5 * tr[j] + fp_.alpha1 * jump_tau * tr[j];
      br[StateVector::RHO * nn + j] +=
          -jump_rv * 0.5 * tl[j] - fp_.alpha1 * jump_tau * tl[j];
      // Momentum equation fluxes.
      bl[StateVector::V * nn + j] += -jump_tau * 0.5 * rho_l * tr[j] +
                                     jump_phi * 0.5 * mu_l * tr[j] +
                                     fp_.alpha2 * jump_v * tr[j];
      br[StateVector::V * nn + j] += -jump_tau * 0.5 * rho_r * tl[j] +
                                     jump_phi * 0.5 * mu_r * tl[j] -
                                     fp_.alpha2 * jump_v * tl[j];
      // Momentum equation viscous (SIPG) face terms.
      bl[StateVector::V * nn + j] +=
          -(s_avg * tr[j] + 0.5 * nu_l * dtr[j] * (2.0 / hl) * jump_v) +
          (fp_.alphaB / e_len) * jump_v * tr[j];
      br[StateVector::V * nn + j] +=
          -(-s_avg * tl[j] + 0.5 * nu_r * dtl[j] * (2.0 / hr) * jump_v) -
          (fp_.alphaB / e_len) * jump_v * tl[j];
      // Phase-field equation.
      bl[StateVector::PHI * nn + j] +=
          -jump_phi * 0.5 * tr[j] * v_l + fp_.alpha3 * jump_mu * tr[j];
      br[StateVector::PHI * nn + j] +=
          -jump_phi * 0.5 * tl[j] * v_r - fp_.alpha3 * jump_mu * tl[j];
      // Chemical-potential equation.
      bl[StateVector::MU * nn + j] += -gamma * jump_sig * 0.5 * tr[j];
      br[StateVector::MU * nn + j] += -gamma * jump_sig * 0.5 * tl[j];
      // Gradient identity, at the new time level.
      bl[StateVector::SIGMA * nn + j] += jump_phin * 0.5 * tr[j];
      br[StateVector::SIGMA * nn + j] += jump_phin * 0.5 * tl[j];
    }
  };

  for (int f = 1; f < nc; ++f) interior_face(f - 1, f);
  if (mesh_->periodic) {
    interior_face(nc - 1, 0);
    return;  // no walls: neither viscous boundary terms nor pins
  }

  // Boundary faces contribute only to the viscous form; the Dirichlet datum
  // of the midpoint velocity enters as exterior trace.
  {
    const int c = 0;
    const double hc = mesh_->size(c);
    const double n = -1.0;
    const double phi_b = mid_trace_l(U_old.phi, U_new.phi, c);
    const double nu = viscosity(phi_b, mp_);
    const double v_b = mid_trace_l(U_old.v, U_new.v, c);
    const double dv_b =
        0.5 * (U_old.v.deriv_trace_left(c) + U_new.v.deriv_trace_left(c));
    const double jv = (v_b - bc_mid.v_left) * n;
    const double s_int = nu * dv_b;
    double* blk = out.data() + c * m;
    for (int j = 0; j < nn; ++j) {
      const double jx = tl[j] * n;
      blk[StateVector::V * nn + j] +=
          -(s_int * jx + nu * dtl[j] * (2.0 / hc) * jv) +
          (fp_.alphaB / hc) * jv * jx;
    }
  }
  {
    const int c = nc - 1;
    const double hc = mesh_->size(c);
    const double n = 1.0;
    const double phi_b = mid_trace_r(U_old.phi, U_new.phi, c);
    const double nu = viscosity(phi_b, mp_);
    const double v_b = mid_trace_r(U_old.v, U_new.v, c);
    const double dv_b =
        0.5 * (U_old.v.deriv_trace_right(c) + U_new.v.deriv_trace_right(c));
    const double jv = (v_b - bc_mid.v_right) * n;
    const double s_int = nu * dv_b;
    double* blk = out.data() + c * m;
    for (int j = 0; j < nn; ++j) {
      const double jx = tr[j] * n;
      blk[StateVector::V * nn + j] +=
          -(s_int * jx + nu * dtr[j] * (2.0 / hc) * jv) +
          (fp_.alphaB / hc) * jv * jx;
    }
  }

  // Strong pins: endpoint traces are nodal values for degree >= 1.
  if (basis_->degree >= 1) {
    const int k = basis_->degree;
    out[0 * m + StateVector::V * nn + 0] =
        U_new.v.cell(0)[0] - bc_new.v_left;
    out[0 * m + StateVector::SIGMA * nn + 0] =
        U_new.sigma.cell(0)[0] - bc_new.sigma_left;
    out[(nc - 1) * m + StateVector::V * nn + k] =
        U_new.v.cell(nc - 1)[k] - bc_new.v_right;
    out[(nc - 1) * m + StateVector::SIGMA * nn + k] =
        U_new.sigma.cell(nc - 1)[k] - bc_new.sigma_right;
  }
}

namespace {

// Cells of the same color must be more than two apart so their residual
// stencils never overlap; on a ring the distance wraps.
std::vector<int> stencil_colors(int nc, bool periodic, int& n_colors) {
  std::vector<int> colors(nc, -1);
  n_colors = 0;
  for (int c = 0; c < nc; ++c) {
    bool used[8] = {};
    for (int d = -2; d <= 2; ++d) {
      if (d == 0) continue;
      int nb = c + d;
      if (periodic) {
        nb = (nb % nc + nc) % nc;
      } else if (nb < 0 || nb >= nc) {
        continue;
      }
      if (colors[nb] >= 0 && colors[nb] < 8) used[colors[nb]] = true;
    }
    int pick = 0;
    while (pick < 8 && used[pick]) ++pick;
    colors[c] = pick;
    n_colors = std::max(n_colors, pick + 1);
  }
  return colors;
}

}  // namespace

void ResidualAssembler::fd_jacobian(const StateVector& U_old,
                                    StateVector& U_probe, double t_old,
                                    double dt, const BoundaryValues& bc_new,
                                    const BoundaryValues& bc_mid,
                                    const SourceTerms* sources,
                                    std::span<const double> base_residual,
                                    RingBlockMatrix& jac) const {
  const int nn = basis_->n_nodes();
  const int nc = mesh_->n_cells();
  const int m = StateVector::n_fields * nn;
  const int n = nc * m;
  if (jac.size() != n || static_cast<int>(base_residual.size()) != n)
    throw std::invalid_argument("fd_jacobian: size mismatch");
  jac.zero();

  static const double sqrt_eps =
      std::sqrt(std::numeric_limits<double>::epsilon());
  std::vector<double> perturbed(n);
  std::vector<double> deltas(nc), originals(nc);
  int n_colors = 0;
  const std::vector<int> colors = stencil_colors(nc, mesh_->periodic, n_colors);

  for (int color = 0; color < n_colors; ++color) {
    for (int l = 0; l < m; ++l) {
      const int field = l / nn;
      const int node = l % nn;
      for (int c = 0; c < nc; ++c) {
        if (colors[c] != color) continue;
        double& coefficient = U_probe.field(field).cell(c)[node];
        originals[c] = coefficient;
        double delta = sqrt_eps * (1.0 + std::abs(coefficient));
        volatile double bumped = coefficient + delta;
        deltas[c] = bumped - coefficient;
        coefficient = bumped;
      }
      assemble(U_old, U_probe, t_old, dt, bc_new, bc_mid, sources, perturbed);
      for (int c = 0; c < nc; ++c) {
        if (colors[c] != color) continue;
        const int col = c * m + l;
        const double inv_delta = 1.0 / deltas[c];
        int row_cells[3];
        int n_row_cells = 0;
        for (int d = -1; d <= 1; ++d) {
          int rc = c + d;
          if (mesh_->periodic) {
            rc = (rc % nc + nc) % nc;
          } else if (rc < 0 || rc >= nc) {
            continue;
          }
          bool seen = false;
          for (int s = 0; s < n_row_cells; ++s) seen |= (row_cells[s] == rc);
          if (!seen) row_cells[n_row_cells++] = rc;
        }
        for (int s = 0; s < n_row_cells; ++s) {
          const int rc = row_cells[s];
          for (int r = rc * m; r < (rc + 1) * m; ++r) {
            const double d = (perturbed[r] - base_residual[r]) * inv_delta;
            if (d != 0.0) jac.set(r, col, d);
          }
        }
        U_probe.field(field).cell(c)[node] = originals[c];
      }
    }
  }
}

}  // namespace nsac
