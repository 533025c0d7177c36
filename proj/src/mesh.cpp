#include "nsac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nsac/linalg.hpp"

namespace nsac {

Mesh1D Mesh1D::uniform(int n_cells, bool periodic) {
  if (n_cells < 1) throw std::invalid_argument("Mesh1D: need at least one cell");
  Mesh1D m;
  m.vertices.resize(n_cells + 1);
  m.cell_size.assign(n_cells, 1.0 / n_cells);
  for (int i = 0; i <= n_cells; ++i)
    m.vertices[i] = static_cast<double>(i) / n_cells;
  m.vertices.front() = 0.0;
  m.vertices.back() = 1.0;
  m.periodic = periodic;
  return m;
}

double Mesh1D::h() const {
  return *std::max_element(cell_size.begin(), cell_size.end());
}

DGField::DGField(const Mesh1D& m, const Basis& b) : mesh(&m), basis(&b) {
  coeff.assign(static_cast<size_t>(m.n_cells()) * b.n_nodes(), 0.0);
}

namespace {

int locate_cell(const Mesh1D& mesh, double x) {
  const int n = mesh.n_cells();
  int c = static_cast<int>(
      std::upper_bound(mesh.vertices.begin(), mesh.vertices.end(), x) -
      mesh.vertices.begin()) - 1;
  return std::clamp(c, 0, n - 1);
}

}  // namespace

double DGField::eval(double x) const {
  const int c = locate_cell(*mesh, x);
  const double xi = 2.0 * (x - mesh->left(c)) / mesh->size(c) - 1.0;
  const int nn = basis->n_nodes();
  double v = 0.0;
  for (int j = 0; j < nn; ++j) v += cell(c)[j] * basis->eval_basis(j, xi);
  return v;
}

double DGField::eval_deriv(double x) const {
  const int c = locate_cell(*mesh, x);
  const double xi = 2.0 * (x - mesh->left(c)) / mesh->size(c) - 1.0;
  const int nn = basis->n_nodes();
  double d = 0.0;
  for (int j = 0; j < nn; ++j) d += cell(c)[j] * basis->eval_basis_deriv(j, xi);
  return d * 2.0 / mesh->size(c);
}

double DGField::trace_left(int c) const {
  const int nn = basis->n_nodes();
  double v = 0.0;
  for (int j = 0; j < nn; ++j) v += cell(c)[j] * basis->trace_left[j];
  return v;
}

double DGField::trace_right(int c) const {
  const int nn = basis->n_nodes();
  double v = 0.0;
  for (int j = 0; j < nn; ++j) v += cell(c)[j] * basis->trace_right[j];
  return v;
}

double DGField::deriv_trace_left(int c) const {
  const int nn = basis->n_nodes();
  double d = 0.0;
  for (int j = 0; j < nn; ++j) d += cell(c)[j] * basis->dtrace_left[j];
  return d * 2.0 / mesh->size(c);
}

double DGField::deriv_trace_right(int c) const {
  const int nn = basis->n_nodes();
  double d = 0.0;
  for (int j = 0; j < nn; ++j) d += cell(c)[j] * basis->dtrace_right[j];
  return d * 2.0 / mesh->size(c);
}

FaceValue jump_avg(const DGField& f, int face) {
  const int n = f.n_cells();
  if (face < 0 || face > n) throw std::out_of_range("jump_avg: unknown face");
  FaceValue fv;
  if (f.mesh->periodic && (face == 0 || face == n)) {
    const double a = f.trace_right(n - 1);
    const double b = f.trace_left(0);
    fv.avg = 0.5 * (a + b);
    fv.jump = a - b;
  } else if (face == 0) {
    const double t = f.trace_left(0);
    fv.avg = t;
    fv.jump = -t;  // outward normal -1
  } else if (face == n) {
    const double t = f.trace_right(n - 1);
    fv.avg = t;
    fv.jump = t;  // outward normal +1
  } else {
    const double a = f.trace_right(face - 1);
    const double b = f.trace_left(face);
    fv.avg = 0.5 * (a + b);
    fv.jump = a - b;
  }
  return fv;
}

FaceTraces face_traces(const DGField& f) {
  const int n = f.n_cells();
  FaceTraces t;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.from_left.assign(n + 1, nan);
  t.from_right.assign(n + 1, nan);
  for (int c = 0; c < n; ++c) {
    t.from_right[c] = f.trace_left(c);
    t.from_left[c + 1] = f.trace_right(c);
  }
  if (f.mesh->periodic) {
    t.from_left[0] = f.trace_right(n - 1);
    t.from_right[n] = f.trace_left(0);
  }
  return t;
}

DGField l2_project(const std::function<double(double)>& f, const Mesh1D& mesh,
                   const Basis& basis) {
  DGField out(mesh, basis);
  const int nn = basis.n_nodes();
  const int nq = basis.n_quad();
  DenseLU mass = DenseLU::factor(basis.mass, nn);
  std::vector<double> rhs(nn);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double xl = mesh.left(c);
    const double hc = mesh.size(c);
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (int q = 0; q < nq; ++q) {
      const double x = xl + 0.5 * (basis.quad.points[q] + 1.0) * hc;
      const double wf = basis.quad.weights[q] * f(x);
      const double* v = &basis.val_at_quad[q * nn];
      for (int j = 0; j < nn; ++j) rhs[j] += wf * v[j];
    }
    // The h/2 Jacobian cancels between mass matrix and right-hand side.
    mass.solve(rhs.data());
    for (int j = 0; j < nn; ++j) out.cell(c)[j] = rhs[j];
  }
  return out;
}

double broken_norm_l2(const DGField& f,
                      const std::function<double(double)>& exact) {
  const Basis& basis = *f.basis;
  const Mesh1D& mesh = *f.mesh;
  const int nn = basis.n_nodes();
  const int nq = basis.n_quad();
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double xl = mesh.left(c);
    const double hc = mesh.size(c);
    for (int q = 0; q < nq; ++q) {
      const double x = xl + 0.5 * (basis.quad.points[q] + 1.0) * hc;
      const double* v = &basis.val_at_quad[q * nn];
      double fh = 0.0;
      for (int j = 0; j < nn; ++j) fh += f.cell(c)[j] * v[j];
      const double d = fh - exact(x);
      acc += 0.5 * hc * basis.quad.weights[q] * d * d;
    }
  }
  return std::sqrt(acc);
}

double integrate(const DGField& f) {
  const Basis& basis = *f.basis;
  const Mesh1D& mesh = *f.mesh;
  const int nn = basis.n_nodes();
  const int nq = basis.n_quad();
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double hc = mesh.size(c);
    for (int q = 0; q < nq; ++q) {
      const double* v = &basis.val_at_quad[q * nn];
      double fh = 0.0;
      for (int j = 0; j < nn; ++j) fh += f.cell(c)[j] * v[j];
      acc += 0.5 * hc * basis.quad.weights[q] * fh;
    }
  }
  return acc;
}

double elementwise_ibp_residual(const DGField& u, const DGField& phi) {
  if (u.mesh != phi.mesh || u.basis != phi.basis)
    throw std::invalid_argument("elementwise_ibp_residual: mismatched fields");
  const Basis& basis = *u.basis;
  const Mesh1D& mesh = *u.mesh;
  const int nn = basis.n_nodes();
  const int nq = basis.n_quad();
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int q = 0; q < nq; ++q) {
      const double* v = &basis.val_at_quad[q * nn];
      const double* d = &basis.der_at_quad[q * nn];
      double uv = 0.0, ud = 0.0, pv = 0.0, pd = 0.0;
      for (int j = 0; j < nn; ++j) {
        uv += u.cell(c)[j] * v[j];
        ud += u.cell(c)[j] * d[j];
        pv += phi.cell(c)[j] * v[j];
        pd += phi.cell(c)[j] * d[j];
      }
      // Reference derivative carries 2/h; the h/2 volume Jacobian cancels it.
      acc += basis.quad.weights[q] * (ud * pv + uv * pd);
    }
  }
  const int n = mesh.n_cells();
  if (mesh.periodic) {
    for (int f = 1; f < n; ++f)
      acc -= phi.trace_right(f - 1) * u.trace_right(f - 1) -
             phi.trace_left(f) * u.trace_left(f);
    acc -= phi.trace_right(n - 1) * u.trace_right(n - 1) -
           phi.trace_left(0) * u.trace_left(0);
    return acc;
  }
  for (int f = 0; f <= n; ++f) {
    double jump_phi_u;
    if (f == 0) {
      jump_phi_u = -phi.trace_left(0) * u.trace_left(0);
    } else if (f == n) {
      jump_phi_u = phi.trace_right(n - 1) * u.trace_right(n - 1);
    } else {
      jump_phi_u = phi.trace_right(f - 1) * u.trace_right(f - 1) -
                   phi.trace_left(f) * u.trace_left(f);
    }
    acc -= jump_phi_u;
  }
  return acc;
}

}  // namespace nsac
