#include "nsac/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "nsac/linalg.hpp"

namespace nsac {

void legendre_all(int n, double x, double* value, double* deriv) {
  value[0] = 1.0;
  if (deriv) deriv[0] = 0.0;
  if (n == 0) return;
  value[1] = x;
  if (deriv) deriv[1] = 1.0;
  for (int m = 2; m <= n; ++m) {
    value[m] = ((2 * m - 1) * x * value[m - 1] - (m - 1) * value[m - 2]) / m;
    if (deriv) deriv[m] = deriv[m - 2] + (2 * m - 1) * value[m - 1];
  }
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.points.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  std::vector<double> p(n + 1), dp(n + 1);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev estimate for the i-th root.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre_all(n, x, p.data(), dp.data());
      const double dx = p[n] / dp[n];
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_all(n, x, p.data(), dp.data());
    const double w = 2.0 / ((1.0 - x * x) * dp[n] * dp[n]);
    rule.points[i] = -x;  // cos ordering gives the largest root first
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

std::vector<double> gauss_lobatto_nodes(int degree) {
  if (degree < 0)
    throw std::invalid_argument("gauss_lobatto_nodes: degree must be >= 0");
  if (degree == 0) return {0.0};
  std::vector<double> nodes(degree + 1, 0.0);
  nodes[0] = -1.0;
  nodes[degree] = 1.0;
  const int k = degree;
  std::vector<double> p(k + 1), dp(k + 1), d2p(k + 1);
  // Interior nodes are roots of P_k'. Newton from Chebyshev-Lobatto guesses;
  // the second derivative follows the same recurrence shifted once.
  for (int i = 1; 2 * i <= k; ++i) {
    double x = std::cos(M_PI * i / k);
    for (int it = 0; it < 100; ++it) {
      legendre_all(k, x, p.data(), dp.data());
      d2p[0] = 0.0;
      if (k >= 1) d2p[1] = 0.0;
      for (int m = 2; m <= k; ++m)
        d2p[m] = d2p[m - 2] + (2 * m - 1) * dp[m - 1];
      const double dx = dp[k] / d2p[k];
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[k - i] = x;
    nodes[i] = -x;
  }
  if (k % 2 == 0 && k >= 2) nodes[k / 2] = 0.0;
  return nodes;
}

Basis Basis::make(int degree, int n_quad) {
  if (degree < 0) throw std::invalid_argument("Basis: degree must be >= 0");
  if (n_quad < 0) n_quad = degree + 3;
  if (n_quad < degree + 2)
    throw std::invalid_argument("Basis: need n_quad >= degree + 2");

  Basis b;
  b.degree = degree;
  b.nodes = gauss_lobatto_nodes(degree);
  b.quad = gauss_legendre(n_quad);

  const int nn = degree + 1;
  // Modal coefficients from the (well-conditioned, small) Vandermonde system
  // V C = I with V[i][m] = P_m(node_i).
  std::vector<double> vand(nn * nn);
  std::vector<double> p(nn), dp(nn);
  for (int i = 0; i < nn; ++i) {
    legendre_all(degree, b.nodes[i], p.data(), dp.data());
    for (int m = 0; m < nn; ++m) vand[i * nn + m] = p[m];
  }
  DenseLU lu = DenseLU::factor(vand, nn);
  b.modal.assign(nn * nn, 0.0);
  std::vector<double> col(nn);
  for (int j = 0; j < nn; ++j) {
    for (int i = 0; i < nn; ++i) col[i] = (i == j) ? 1.0 : 0.0;
    lu.solve(col.data());
    for (int m = 0; m < nn; ++m) b.modal[m * nn + j] = col[m];
  }

  auto tabulate = [&](double x, double* val, double* der) {
    legendre_all(degree, x, p.data(), dp.data());
    for (int j = 0; j < nn; ++j) {
      double v = 0.0, d = 0.0;
      for (int m = 0; m < nn; ++m) {
        v += b.modal[m * nn + j] * p[m];
        d += b.modal[m * nn + j] * dp[m];
      }
      val[j] = v;
      der[j] = d;
    }
  };

  b.val_at_quad.assign(n_quad * nn, 0.0);
  b.der_at_quad.assign(n_quad * nn, 0.0);
  for (int q = 0; q < n_quad; ++q)
    tabulate(b.quad.points[q], &b.val_at_quad[q * nn], &b.der_at_quad[q * nn]);

  b.trace_left.assign(nn, 0.0);
  b.trace_right.assign(nn, 0.0);
  b.dtrace_left.assign(nn, 0.0);
  b.dtrace_right.assign(nn, 0.0);
  tabulate(-1.0, b.trace_left.data(), b.dtrace_left.data());
  tabulate(1.0, b.trace_right.data(), b.dtrace_right.data());

  b.mass.assign(nn * nn, 0.0);
  for (int q = 0; q < n_quad; ++q) {
    const double w = b.quad.weights[q];
    const double* v = &b.val_at_quad[q * nn];
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) b.mass[i * nn + j] += w * v[i] * v[j];
  }
  return b;
}

double Basis::eval_basis(int j, double xi) const {
  const int nn = n_nodes();
  std::vector<double> p(nn);
  legendre_all(degree, xi, p.data(), nullptr);
  double v = 0.0;
  for (int m = 0; m < nn; ++m) v += modal[m * nn + j] * p[m];
  return v;
}

double Basis::eval_basis_deriv(int j, double xi) const {
  const int nn = n_nodes();
  std::vector<double> p(nn), dp(nn);
  legendre_all(degree, xi, p.data(), dp.data());
  double d = 0.0;
  for (int m = 0; m < nn; ++m) d += modal[m * nn + j] * dp[m];
  return d;
}

}  // namespace nsac
