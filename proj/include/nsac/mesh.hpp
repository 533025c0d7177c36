#pragma once

#include <functional>
#include <vector>

#include "nsac/basis.hpp"

namespace nsac {

/// Partition of [0,1] into cells. Faces are the vertices: face f sits at
/// vertex f, so faces 1..n-1 are interior and faces 0, n are the boundary
/// (outward normals -1 and +1). A periodic mesh identifies the two boundary
/// vertices instead, turning them into one more interior face; wall boundary
/// conditions do not apply there.
struct Mesh1D {
  std::vector<double> vertices;   // n_cells + 1, strictly increasing, 0..1
  std::vector<double> cell_size;
  bool periodic = false;

  static Mesh1D uniform(int n_cells, bool periodic = false);

  int n_cells() const { return static_cast<int>(cell_size.size()); }
  int n_interior_faces() const { return n_cells() - 1 + (periodic ? 1 : 0); }
  double h() const;  // max cell size
  double left(int c) const { return vertices[c]; }
  double right(int c) const { return vertices[c + 1]; }
  double size(int c) const { return cell_size[c]; }
};

/// Broken polynomial function: per-cell nodal values on the shared basis.
/// Mesh and basis are referenced, not owned; coefficients are value-semantic.
struct DGField {
  const Mesh1D* mesh = nullptr;
  const Basis* basis = nullptr;
  std::vector<double> coeff;  // n_cells * (degree+1), nodal values

  DGField() = default;
  DGField(const Mesh1D& m, const Basis& b);

  int n_cells() const { return mesh->n_cells(); }
  int degree() const { return basis->degree; }
  double* cell(int c) { return coeff.data() + c * basis->n_nodes(); }
  const double* cell(int c) const { return coeff.data() + c * basis->n_nodes(); }

  double eval(double x) const;
  double eval_deriv(double x) const;
  double trace_left(int c) const;        // value at the left end of cell c
  double trace_right(int c) const;
  double deriv_trace_left(int c) const;  // d/dx at the left end of cell c
  double deriv_trace_right(int c) const;
};

struct FaceValue {
  double jump = 0.0;
  double avg = 0.0;
};

// Jump/average of a field at face f in [0, n_cells]. Interior: jump is the
// left trace minus the right trace, avg the mean. Boundary: avg is the
// interior trace and jump carries the outward normal (trace * n).
FaceValue jump_avg(const DGField& f, int face);

/// One-sided traces at every face. from_left[f] comes from cell f-1 (faces
/// 1..n), from_right[f] from cell f (faces 0..n-1); the missing boundary side
/// is NaN.
struct FaceTraces {
  std::vector<double> from_left;
  std::vector<double> from_right;
};

FaceTraces face_traces(const DGField& f);

// Cellwise L2 projection computed with the basis quadrature rule.
DGField l2_project(const std::function<double(double)>& f, const Mesh1D& mesh,
                   const Basis& basis);

// sqrt of the broken quadrature sum of (field - exact)^2.
double broken_norm_l2(const DGField& f,
                      const std::function<double(double)>& exact);

// Quadrature value of the integral of the field over [0,1].
double integrate(const DGField& f);

// Residual of the elementwise integration-by-parts identity
//   sum_T int_T u' phi = -int u phi' + int_faces [[phi u]];
// returns int u' phi + int u phi' - sum_faces [[phi u]], which must vanish.
double elementwise_ibp_residual(const DGField& u, const DGField& phi);

}  // namespace nsac
