#include "nsac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsac {

DenseLU DenseLU::factor(std::vector<double> a, int n) {
  DenseLU f;
  f.n = n;
  f.lu = std::move(a);
  f.piv.resize(n);
  for (int col = 0; col < n; ++col) {
    int p = col;
    double best = std::abs(f.lu[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(f.lu[r * n + col]);
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("DenseLU: singular matrix");
    f.piv[col] = p;
    if (p != col)
      for (int c = 0; c < n; ++c) std::swap(f.lu[col * n + c], f.lu[p * n + c]);
    const double d = f.lu[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double m = f.lu[r * n + col] / d;
      f.lu[r * n + col] = m;
      for (int c = col + 1; c < n; ++c) f.lu[r * n + c] -= m * f.lu[col * n + c];
    }
  }
  return f;
}

void DenseLU::solve(double* rhs) const {
  for (int i = 0; i < n; ++i) {
    if (piv[i] != i) std::swap(rhs[i], rhs[piv[i]]);
    for (int j = 0; j < i; ++j) rhs[i] -= lu[i * n + j] * rhs[j];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) rhs[i] -= lu[i * n + j] * rhs[j];
    rhs[i] /= lu[i * n + i];
  }
}

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1) {
  if (n < 1 || kl < 0 || ku < 0)
    throw std::invalid_argument("BandedMatrix: bad dimensions");
  ab_.assign(static_cast<size_t>(rows_) * n_, 0.0);
  piv_.assign(n_, 0);
}

void BandedMatrix::zero() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

int BandedMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) return -1;
  // Storage allows ku + kl superdiagonals (pivoting fill-in) and kl sub.
  if (j - i > ku_ + kl_ || i - j > kl_) return -1;
  return (kl_ + ku_ + i - j) + j * rows_;
}

double& BandedMatrix::at(int i, int j) {
  // The assembled band is kl/ku; fill-in rows are reserved for factor() only.
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || j - i > ku_ || i - j > kl_)
    throw std::out_of_range("BandedMatrix::at outside band");
  return ab_[static_cast<size_t>((kl_ + ku_ + i - j)) + j * rows_];
}

double BandedMatrix::get(int i, int j) const {
  const int idx = index(i, j);
  return idx < 0 ? 0.0 : ab_[idx];
}

void BandedMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  if (factored_)
    throw std::logic_error("BandedMatrix::matvec on factored matrix");
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const int j0 = std::max(0, i - kl_);
    const int j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j)
      s += ab_[static_cast<size_t>((kl_ + ku_ + i - j)) + j * rows_] * x[j];
    y[i] = s;
  }
}

void BandedMatrix::factor() {
  const int kv = kl_ + ku_;
  for (int j = 0; j < n_; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);  // subdiagonal entries in col j
    int jp = 0;
    double best = std::abs(ab_[static_cast<size_t>(kv) + j * rows_]);
    for (int l = 1; l <= km; ++l) {
      const double v = std::abs(ab_[static_cast<size_t>(kv + l) + j * rows_]);
      if (v > best) {
        best = v;
        jp = l;
      }
    }
    piv_[j] = j + jp;
    if (best == 0.0)
      throw std::runtime_error("BandedMatrix::factor: singular matrix");
    const int ju = std::min(n_ - 1, j + kv);  // last column touched by row j
    if (jp != 0) {
      for (int c = j; c <= ju; ++c) {
        const size_t r1 = static_cast<size_t>(kv + j - c) + c * rows_;
        const size_t r2 = static_cast<size_t>(kv + j + jp - c) + c * rows_;
        std::swap(ab_[r1], ab_[r2]);
      }
    }
    const double d = ab_[static_cast<size_t>(kv) + j * rows_];
    for (int l = 1; l <= km; ++l) {
      const size_t rl = static_cast<size_t>(kv + l) + j * rows_;
      const double m = ab_[rl] / d;
      ab_[rl] = m;
      for (int c = j + 1; c <= ju; ++c) {
        ab_[static_cast<size_t>(kv + j + l - c) + c * rows_] -=
            m * ab_[static_cast<size_t>(kv + j - c) + c * rows_];
      }
    }
  }
  factored_ = true;
}

void BandedMatrix::solve(std::span<double> rhs) const {
  if (!factored_) throw std::logic_error("BandedMatrix::solve before factor");
  const int kv = kl_ + ku_;
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(rhs[j], rhs[piv_[j]]);
    const int km = std::min(kl_, n_ - 1 - j);
    for (int l = 1; l <= km; ++l)
      rhs[j + l] -= ab_[static_cast<size_t>(kv + l) + j * rows_] * rhs[j];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    const int j1 = std::min(n_ - 1, i + kv);
    double s = rhs[i];
    for (int j = i + 1; j <= j1; ++j)
      s -= ab_[static_cast<size_t>(kv + i - j) + j * rows_] * rhs[j];
    rhs[i] = s / ab_[static_cast<size_t>(kv) + i * rows_];
  }
}

BlockJacobi BlockJacobi::from(const BandedMatrix& a, int block_size) {
  if (block_size < 1 || a.size() % block_size != 0)
    throw std::invalid_argument("BlockJacobi: bad block size");
  BlockJacobi p;
  p.block = block_size;
  const int nb = a.size() / block_size;
  p.blocks.reserve(nb);
  std::vector<double> blk(static_cast<size_t>(block_size) * block_size);
  for (int b = 0; b < nb; ++b) {
    for (int i = 0; i < block_size; ++i)
      for (int j = 0; j < block_size; ++j)
        blk[i * block_size + j] =
            a.get(b * block_size + i, b * block_size + j);
    p.blocks.push_back(DenseLU::factor(blk, block_size));
  }
  return p;
}

void BlockJacobi::apply(std::span<double> v) const {
  for (size_t b = 0; b < blocks.size(); ++b)
    blocks[b].solve(v.data() + b * block);
}

RingBlockMatrix::RingBlockMatrix(int n_blocks, int block, bool periodic)
    : nb_(n_blocks),
      m_(block),
      n_(n_blocks * block),
      periodic_(periodic),
      use_corners_(periodic && n_blocks >= 3),
      band_(n_, 2 * block - 1, 2 * block - 1) {
  if (n_blocks < 1 || block < 1)
    throw std::invalid_argument("RingBlockMatrix: bad dimensions");
  if (use_corners_) {
    corner_tr_.assign(static_cast<size_t>(m_) * m_, 0.0);
    corner_bl_.assign(static_cast<size_t>(m_) * m_, 0.0);
  }
}

bool RingBlockMatrix::in_top_corner(int i, int j) const {
  return use_corners_ && i < m_ && j >= n_ - m_;
}

bool RingBlockMatrix::in_bottom_corner(int i, int j) const {
  return use_corners_ && i >= n_ - m_ && j < m_;
}

void RingBlockMatrix::zero() {
  band_.zero();
  std::fill(corner_tr_.begin(), corner_tr_.end(), 0.0);
  std::fill(corner_bl_.begin(), corner_bl_.end(), 0.0);
  woodbury_y_.clear();
  factored_ = false;
}

void RingBlockMatrix::set(int i, int j, double value) {
  if (in_top_corner(i, j)) {
    corner_tr_[static_cast<size_t>(i) * m_ + (j - (n_ - m_))] = value;
  } else if (in_bottom_corner(i, j)) {
    corner_bl_[static_cast<size_t>(i - (n_ - m_)) * m_ + j] = value;
  } else {
    band_.at(i, j) = value;
  }
}

double RingBlockMatrix::get(int i, int j) const {
  if (in_top_corner(i, j))
    return corner_tr_[static_cast<size_t>(i) * m_ + (j - (n_ - m_))];
  if (in_bottom_corner(i, j))
    return corner_bl_[static_cast<size_t>(i - (n_ - m_)) * m_ + j];
  return band_.get(i, j);
}

void RingBlockMatrix::matvec(std::span<const double> x,
                             std::span<double> y) const {
  band_.matvec(x, y);
  if (!use_corners_) return;
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    for (int j = 0; j < m_; ++j)
      s += corner_tr_[static_cast<size_t>(i) * m_ + j] * x[n_ - m_ + j];
    y[i] += s;
  }
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    for (int j = 0; j < m_; ++j)
      s += corner_bl_[static_cast<size_t>(i) * m_ + j] * x[j];
    y[n_ - m_ + i] += s;
  }
}

void RingBlockMatrix::factor() {
  band_.factor();
  if (use_corners_) {
    // Woodbury: A = B + U V^T with U the unit columns of the first and last
    // block rows and V carrying the corner entries. Y = B^{-1} U.
    const int r = 2 * m_;
    woodbury_y_.assign(static_cast<size_t>(n_) * r, 0.0);
    std::vector<double> col(n_);
    for (int k = 0; k < r; ++k) {
      std::fill(col.begin(), col.end(), 0.0);
      col[k < m_ ? k : n_ - m_ + (k - m_)] = 1.0;
      band_.solve(col);
      for (int i = 0; i < n_; ++i)
        woodbury_y_[static_cast<size_t>(i) * r + k] = col[i];
    }
    // Capacitance S = I + V^T Y.
    std::vector<double> s(static_cast<size_t>(r) * r, 0.0);
    for (int k = 0; k < r; ++k) s[static_cast<size_t>(k) * r + k] = 1.0;
    for (int k = 0; k < m_; ++k)
      for (int l = 0; l < r; ++l) {
        double acc = 0.0;
        for (int j = 0; j < m_; ++j)
          acc += corner_tr_[static_cast<size_t>(k) * m_ + j] *
                 woodbury_y_[static_cast<size_t>(n_ - m_ + j) * r + l];
        s[static_cast<size_t>(k) * r + l] += acc;
      }
    for (int k = 0; k < m_; ++k)
      for (int l = 0; l < r; ++l) {
        double acc = 0.0;
        for (int j = 0; j < m_; ++j)
          acc += corner_bl_[static_cast<size_t>(k) * m_ + j] *
                 woodbury_y_[static_cast<size_t>(j) * r + l];
        s[static_cast<size_t>(m_ + k) * r + l] += acc;
      }
    capacitance_ = DenseLU::factor(std::move(s), r);
  }
  factored_ = true;
}

void RingBlockMatrix::solve(std::span<double> rhs) const {
  if (!factored_) throw std::logic_error("RingBlockMatrix::solve before factor");
  band_.solve(rhs);
  if (!use_corners_) return;
  const int r = 2 * m_;
  std::vector<double> w(r, 0.0);
  for (int k = 0; k < m_; ++k) {
    double acc = 0.0;
    for (int j = 0; j < m_; ++j)
      acc += corner_tr_[static_cast<size_t>(k) * m_ + j] * rhs[n_ - m_ + j];
    w[k] = acc;
  }
  for (int k = 0; k < m_; ++k) {
    double acc = 0.0;
    for (int j = 0; j < m_; ++j)
      acc += corner_bl_[static_cast<size_t>(k) * m_ + j] * rhs[j];
    w[m_ + k] = acc;
  }
  capacitance_.solve(w.data());
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int k = 0; k < r; ++k)
      acc += woodbury_y_[static_cast<size_t>(i) * r + k] * w[k];
    rhs[i] -= acc;
  }
}

BlockJacobi BlockJacobi::from(const RingBlockMatrix& a) {
  BlockJacobi p;
  p.block = a.block_size();
  const int nb = a.size() / a.block_size();
  p.blocks.reserve(nb);
  std::vector<double> blk(static_cast<size_t>(p.block) * p.block);
  for (int b = 0; b < nb; ++b) {
    for (int i = 0; i < p.block; ++i)
      for (int j = 0; j < p.block; ++j)
        blk[i * p.block + j] = a.get(b * p.block + i, b * p.block + j);
    p.blocks.push_back(DenseLU::factor(blk, p.block));
  }
  return p;
}

namespace {

template <typename Matrix>
BicgstabResult bicgstab_impl(const Matrix& a, const BlockJacobi& precond,
                             std::span<const double> b, std::span<double> x,
                             double abs_tol, int max_iter) {
  const int n = a.size();
  std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n), y(n), z(n);
  auto nrm2 = [&](std::span<const double> u) {
    double s2 = 0.0;
    for (double e : u) s2 += e * e;
    return std::sqrt(s2);
  };
  auto dot = [&](std::span<const double> u, std::span<const double> w) {
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) s2 += u[i] * w[i];
    return s2;
  };

  a.matvec(x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  r0 = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  std::fill(p.begin(), p.end(), 0.0);
  std::fill(v.begin(), v.end(), 0.0);

  BicgstabResult res;
  res.residual = nrm2(r);
  if (res.residual <= abs_tol) {
    res.converged = true;
    return res;
  }
  for (int it = 1; it <= max_iter; ++it) {
    const double rho_new = dot(r0, r);
    if (rho_new == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    y = p;
    precond.apply(y);
    a.matvec(y, v);
    alpha = rho / dot(r0, v);
    for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (nrm2(s) <= abs_tol) {
      for (int i = 0; i < n; ++i) x[i] += alpha * y[i];
      res.converged = true;
      res.iterations = it;
      res.residual = nrm2(s);
      return res;
    }
    z = s;
    precond.apply(z);
    a.matvec(z, t);
    const double tt = dot(t, t);
    if (tt == 0.0) break;
    omega = dot(t, s) / tt;
    for (int i = 0; i < n; ++i) x[i] += alpha * y[i] + omega * z[i];
    for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    res.iterations = it;
    res.residual = nrm2(r);
    if (res.residual <= abs_tol) {
      res.converged = true;
      return res;
    }
    if (omega == 0.0) break;
  }
  return res;
}

}  // namespace

BicgstabResult bicgstab(const BandedMatrix& a, const BlockJacobi& precond,
                        std::span<const double> b, std::span<double> x,
                        double abs_tol, int max_iter) {
  return bicgstab_impl(a, precond, b, x, abs_tol, max_iter);
}

BicgstabResult bicgstab(const RingBlockMatrix& a, const BlockJacobi& precond,
                        std::span<const double> b, std::span<double> x,
                        double abs_tol, int max_iter) {
  return bicgstab_impl(a, precond, b, x, abs_tol, max_iter);
}

}  // namespace nsac
