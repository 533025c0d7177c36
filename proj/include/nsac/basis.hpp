#pragma once

#include <vector>

namespace nsac {

// Legendre polynomial values P_0..P_n and derivatives at x, via the stable
// three-term recurrences (valid at the endpoints as well).
void legendre_all(int n, double x, double* value, double* deriv);

struct GaussRule {
  std::vector<double> points;   // on [-1,1], ascending
  std::vector<double> weights;  // sum to 2
  int size() const { return static_cast<int>(points.size()); }
};

// Gauss-Legendre rule with n points (exact for polynomials of degree 2n-1).
GaussRule gauss_legendre(int n);

// Gauss-Lobatto points for polynomial degree k (k+1 nodes including +-1).
// Degree 0 degenerates to the single midpoint node {0}.
std::vector<double> gauss_lobatto_nodes(int degree);

/// Nodal Lagrange basis on Gauss-Lobatto points of the reference cell [-1,1],
/// with a Gauss-Legendre quadrature rule and tabulated basis values. The
/// endpoint nodes carry the traces directly for degree >= 1.
struct Basis {
  int degree = 0;
  std::vector<double> nodes;  // degree+1 Gauss-Lobatto nodes
  GaussRule quad;             // n_q = degree + 3 by default

  // Tabulations, indexed [q * n_nodes + j].
  std::vector<double> val_at_quad;  // l_j(x_q)
  std::vector<double> der_at_quad;  // l_j'(x_q), reference-cell derivative
  std::vector<double> trace_left;   // l_j(-1)
  std::vector<double> trace_right;  // l_j(+1)
  std::vector<double> dtrace_left;  // l_j'(-1)
  std::vector<double> dtrace_right; // l_j'(+1)
  std::vector<double> mass;         // reference mass matrix, row-major
  std::vector<double> modal;        // modal coefficients C[m * n_nodes + j]:
                                    // l_j(x) = sum_m C[m][j] P_m(x)

  // Quadrature must resolve degree-2k mass integrands: n_quad >= degree + 2.
  static Basis make(int degree, int n_quad = -1);

  int n_nodes() const { return degree + 1; }
  int n_quad() const { return quad.size(); }

  // Evaluate nodal basis function j (or its derivative) at arbitrary xi.
  double eval_basis(int j, double xi) const;
  double eval_basis_deriv(int j, double xi) const;
};

}  // namespace nsac
