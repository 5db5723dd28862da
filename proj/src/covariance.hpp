#pragma once

#include <vector>

#include "linalg.hpp"
#include "process.hpp"

namespace flip {

// Lagged covariance machinery in basis coordinates. The matrix stored for lag
// h has entry (l, j) = <C_{X;h} nu_j, nu_l> = E <X_0, nu_j><X_h, nu_l>, so it
// equals E[x_h x_0^T] for the coordinate vectors; negative lags are obtained
// by transposition.

enum class CovProvenance { analytic, empirical };

struct LagCovSet {
  int dim = 0;
  std::vector<Matrix> lags;  // lags[h] for h = 0..H
  CovProvenance provenance = CovProvenance::analytic;
  /// Bound on sum_{h>H} ||C_{X;h}||_L. Zero means the set is exact.
  double tail_bound = 0.0;

  int max_lag() const { return static_cast<int>(lags.size()) - 1; }
  /// Lag h >= 0. Beyond max_lag an exact set returns zero, otherwise throws.
  Matrix at(int h) const;
  /// Any integer lag; negative lags transpose.
  Matrix at_signed(int h) const;
};

/// Exact lag covariances of the model up to max_lag. FMA/GeneralMA use the
/// closed form sum over coefficients; FAR(1) solves the stationarity fixed
/// point C = Phi C Phi^T + C_eps to `tol` and then applies powers of Phi.
LagCovSet analytic_lag_cov_set(const LinearProcessModel& model, int max_lag,
                               double tol = 1e-12);

/// Single analytic lag, same conventions.
Matrix analytic_lag_cov(const LinearProcessModel& model, int h,
                        double tol = 1e-12);

/// Sample lag covariance with divisor n and sample-mean centering:
/// (1/n) sum_t (x_{t+h} - xbar)(x_t - xbar)^T.
Matrix empirical_lag_cov(const Matrix& trajectory, int h);

/// All sample lags 0..max_lag as a set.
LagCovSet empirical_lag_cov_set(const Matrix& trajectory, int max_lag);

/// Leading out_dim x in_dim block of the lag-h matrix; in coordinates the
/// projection P C P is a plain truncation.
Matrix projected_lag_cov(const LagCovSet& covs, int out_dim, int in_dim, int h);

/// Lag set truncated to the leading dim x dim blocks.
LagCovSet project_lag_set(const LagCovSet& covs, int dim);

/// Lag set rotated into a new basis: M'_h = R^T M_h R.
LagCovSet rotate_lag_set(const LagCovSet& covs, const Matrix& rotation);

/// Covariance of the stacked vector (X_{d_n,n}, ..., X_{d_1,1}); dims are
/// given in time order d_1..d_n and must not exceed the set dimension.
struct BlockCovariance {
  std::vector<int> dims;  // time order: dims[t-1] belongs to X_t
  Matrix matrix;          // sum(dims) x sum(dims), symmetric PSD

  int total_dim() const;
};

BlockCovariance assemble_block_covariance(const LagCovSet& covs,
                                          const std::vector<int>& dims);

/// Spectral density matrix f[w] = (1/2pi) sum_h e^{-ihw} C_h on a uniform
/// grid over (-pi, pi], with the grid infimum alpha of its smallest
/// eigenvalues. alpha is refined by doubling the grid until stable to 1e-8.
struct SpectralDensity {
  Vector omegas;
  std::vector<ComplexMatrix> values;
  double alpha = 0.0;

  int grid_size() const { return static_cast<int>(omegas.size()); }
};

SpectralDensity spectral_density(const LagCovSet& covs, int omega_grid_size);

/// Largest entrywise error of the inversion C_h = int f[w] e^{ihw} dw under
/// the grid quadrature (imaginary residue included).
double spectral_duality_check(const LagCovSet& covs, const SpectralDensity& sd,
                              int h);

/// Eigendecomposition of a symmetric PSD coordinate matrix, eigenvalues
/// sorted nonincreasing, each eigenvector's first nonzero coordinate made
/// positive. Throws if an eigenvalue falls below -1e-8.
struct CovarianceEigen {
  Vector eigenvalues;  // descending
  Matrix vectors;      // columns, the rotation into the eigenbasis
};

CovarianceEigen covariance_eigenbasis(const Matrix& c0);

}  // namespace flip
