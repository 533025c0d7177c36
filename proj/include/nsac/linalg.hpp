#pragma once

#include <span>
#include <vector>

namespace nsac {

/// Dense LU with partial pivoting for the small systems that appear per cell
/// (basis construction, projections, preconditioner blocks).
struct DenseLU {
  int n = 0;
  std::vector<double> lu;  // row-major
  std::vector<int> piv;

  static DenseLU factor(std::vector<double> a, int n);  // throws if singular
  void solve(double* rhs) const;
};

/// Banded matrix in LAPACK-style band storage with room for pivoting fill-in.
/// Entry (i,j) is stored when |i-j| is within the declared bands; the LU keeps
/// up to kl extra superdiagonals.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  void zero();
  double& at(int i, int j);        // throws if outside the band
  double get(int i, int j) const;  // 0 outside the band

  void matvec(std::span<const double> x, std::span<double> y) const;

  // In-place LU with partial pivoting; solve overwrites rhs with the solution.
  void factor();
  void solve(std::span<double> rhs) const;
  bool factored() const { return factored_; }

 private:
  int index(int i, int j) const;  // -1 if outside the storage band
  int n_, kl_, ku_;
  int rows_;  // 2*kl + ku + 1
  std::vector<double> ab_;
  std::vector<int> piv_;
  bool factored_ = false;
};

class RingBlockMatrix;

/// Block-Jacobi preconditioner: factorizes the contiguous diagonal blocks.
struct BlockJacobi {
  int block = 0;
  std::vector<DenseLU> blocks;
  static BlockJacobi from(const BandedMatrix& a, int block_size);
  static BlockJacobi from(const RingBlockMatrix& a);
  void apply(std::span<double> v) const;
};

/// Block-tridiagonal matrix of nb blocks of size m, with the two dense corner
/// blocks a ring topology adds. The tridiagonal part lives in banded storage;
/// a factorization handles the corners through the Woodbury identity, so the
/// direct solve stays deterministic.
class RingBlockMatrix {
 public:
  RingBlockMatrix(int n_blocks, int block, bool periodic);

  int size() const { return n_; }
  int block_size() const { return m_; }
  bool periodic() const { return periodic_; }

  void zero();
  void set(int i, int j, double value);  // routes to band or corner storage
  double get(int i, int j) const;
  void matvec(std::span<const double> x, std::span<double> y) const;

  void factor();
  void solve(std::span<double> rhs) const;

 private:
  bool in_top_corner(int i, int j) const;
  bool in_bottom_corner(int i, int j) const;
  int nb_, m_, n_;
  bool periodic_;
  bool use_corners_;  // ring with >= 3 blocks; otherwise the band suffices
  BandedMatrix band_;
  std::vector<double> corner_tr_, corner_bl_;  // m x m, row-major
  std::vector<double> woodbury_y_;             // B^{-1} U, n x 2m
  DenseLU capacitance_;
  bool factored_ = false;
};

struct BicgstabResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

// Right-preconditioned BiCGSTAB; x holds the initial guess on entry and the
// solution on exit. Convergence is on the absolute 2-norm.
BicgstabResult bicgstab(const BandedMatrix& a, const BlockJacobi& precond,
                        std::span<const double> b, std::span<double> x,
                        double abs_tol, int max_iter);
BicgstabResult bicgstab(const RingBlockMatrix& a, const BlockJacobi& precond,
                        std::span<const double> b, std::span<double> x,
                        double abs_tol, int max_iter);

}  // namespace nsac
