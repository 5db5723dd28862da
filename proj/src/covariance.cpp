#include "covariance.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace flip {

Matrix LagCovSet::at(int h) const {
  if (h < 0) throw config_error("lag covariance: negative lag, use at_signed");
  if (h <= max_lag()) return lags[h];
  if (tail_bound == 0.0) return Matrix::Zero(dim, dim);
  throw config_error("lag covariance: lag " + std::to_string(h) +
                     " beyond truncation " + std::to_string(max_lag()));
}

Matrix LagCovSet::at_signed(int h) const {
  return h >= 0 ? at(h) : Matrix(at(-h).transpose());
}

namespace {

constexpr int kFixedPointCap = 100000;

Matrix far1_stationary_cov(const Matrix& phi, const Matrix& ceps, double tol) {
  Matrix c = ceps;
  for (int it = 0; it < kFixedPointCap; ++it) {
    Matrix next = phi * c * phi.transpose() + ceps;
    const double change = nuclear_norm(next - c);
    c = std::move(next);
    if (change < tol) return c;
  }
  throw numeric_error(
      "far1 covariance fixed point did not converge within iteration cap");
}

}  // namespace

LagCovSet analytic_lag_cov_set(const LinearProcessModel& model, int max_lag,
                               double tol) {
  validate(model);
  if (max_lag < 0) throw config_error("analytic_lag_cov_set: negative max lag");
  const int dim = model.dim;
  const Matrix ceps = Matrix(model.noise.eigenvalues.asDiagonal());
  LagCovSet out;
  out.dim = dim;
  out.provenance = CovProvenance::analytic;
  out.lags.reserve(max_lag + 1);

  if (model.kind == ModelKind::far1) {
    const Matrix& phi = model.coeffs[0];
    const Matrix c0 = far1_stationary_cov(phi, ceps, tol);
    Matrix ch = c0;
    for (int h = 0; h <= max_lag; ++h) {
      out.lags.push_back(ch);
      ch = phi * ch;
    }
    // Tail of the dropped lags, geometric in ||Phi||.
    const double nrm = operator_norm(phi);
    out.tail_bound = nrm < 1e-300
                         ? 0.0
                         : operator_norm(c0) * std::pow(nrm, max_lag + 1) /
                               (1.0 - nrm);
    return out;
  }

  // Finite moving average: C_h = sum_{j>=0} psi_{j+h} C_eps psi_j^T, psi_0 = I.
  const int q = model.order();
  auto psi = [&](int j) -> Matrix {
    if (j == 0) return Matrix::Identity(dim, dim);
    return model.coeffs[j - 1];
  };
  for (int h = 0; h <= max_lag; ++h) {
    Matrix ch = Matrix::Zero(dim, dim);
    for (int j = 0; j + h <= q; ++j)
      ch += psi(j + h) * ceps * psi(j).transpose();
    out.lags.push_back(std::move(ch));
  }
  out.tail_bound = 0.0;
  if (model.kind == ModelKind::general_ma && model.psi_tail_bound > 0.0) {
    // Dropped MA(infinity) tail propagates into every lag bound.
    out.tail_bound = model.psi_tail_bound * operator_norm(ceps) *
                     (2.0 + model.psi_tail_bound);
  }
  return out;
}

Matrix analytic_lag_cov(const LinearProcessModel& model, int h, double tol) {
  if (h < 0) throw config_error("analytic_lag_cov: lag must be nonnegative");
  return analytic_lag_cov_set(model, h, tol).lags[h];
}

Matrix empirical_lag_cov(const Matrix& trajectory, int h) {
  const auto n = trajectory.rows();
  if (h < 0) throw config_error("empirical_lag_cov: negative lag");
  if (h >= n)
    throw config_error("empirical_lag_cov: lag " + std::to_string(h) +
                       " not below sample size " + std::to_string(n));
  const Vector mean = trajectory.colwise().mean();
  const Matrix centered = trajectory.rowwise() - mean.transpose();
  const auto dim = trajectory.cols();
  Matrix acc = Matrix::Zero(dim, dim);
  for (Eigen::Index t = 0; t + h < n; ++t)
    acc += centered.row(t + h).transpose() * centered.row(t);
  return acc / static_cast<double>(n);
}

LagCovSet empirical_lag_cov_set(const Matrix& trajectory, int max_lag) {
  LagCovSet out;
  out.dim = static_cast<int>(trajectory.cols());
  out.provenance = CovProvenance::empirical;
  out.tail_bound = -1.0;  // unknown; at() refuses lags beyond max_lag
  for (int h = 0; h <= max_lag; ++h)
    out.lags.push_back(empirical_lag_cov(trajectory, h));
  return out;
}

Matrix projected_lag_cov(const LagCovSet& covs, int out_dim, int in_dim,
                         int h) {
  if (out_dim < 0 || out_dim > covs.dim || in_dim < 0 || in_dim > covs.dim)
    throw config_error("projected_lag_cov: dimensions exceed the set");
  return covs.at_signed(h).topLeftCorner(out_dim, in_dim);
}

LagCovSet project_lag_set(const LagCovSet& covs, int dim) {
  if (dim < 1 || dim > covs.dim)
    throw config_error("project_lag_set: dimension exceeds the set");
  LagCovSet out = covs;
  out.dim = dim;
  for (Matrix& m : out.lags) m = Matrix(m.topLeftCorner(dim, dim));
  return out;
}

LagCovSet rotate_lag_set(const LagCovSet& covs, const Matrix& rotation) {
  if (rotation.rows() != covs.dim)
    throw config_error("rotate_lag_set: rotation does not match dimension");
  LagCovSet out = covs;
  out.dim = static_cast<int>(rotation.cols());
  for (Matrix& m : out.lags) m = rotation.transpose() * m * rotation;
  return out;
}

int BlockCovariance::total_dim() const {
  int s = 0;
  for (int d : dims) s += d;
  return s;
}

BlockCovariance assemble_block_covariance(const LagCovSet& covs,
                                          const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  if (n == 0) throw config_error("assemble_block_covariance: empty dims");
  for (int d : dims)
    if (d < 1 || d > covs.dim)
      throw config_error("assemble_block_covariance: dims exceed the set");
  BlockCovariance out;
  out.dims = dims;
  const int total = out.total_dim();
  out.matrix.resize(total, total);
  // Stack order (X_n, ..., X_1): block row i covers time t_i = n - i.
  std::vector<int> offset(n);
  int acc = 0;
  for (int i = 0; i < n; ++i) {
    offset[i] = acc;
    acc += dims[n - 1 - i];
  }
  for (int i = 0; i < n; ++i) {
    const int ti = n - 1 - i;  // 0-based time of block row i
    for (int k = 0; k < n; ++k) {
      const int tk = n - 1 - k;
      out.matrix.block(offset[i], offset[k], dims[ti], dims[tk]) =
          covs.at_signed(ti - tk).topLeftCorner(dims[ti], dims[tk]);
    }
  }
  return out;
}

namespace {

ComplexMatrix spectral_value(const LagCovSet& covs, double omega) {
  ComplexMatrix f = covs.lags[0].cast<std::complex<double>>();
  for (int h = 1; h <= covs.max_lag(); ++h) {
    const std::complex<double> phase(std::cos(h * omega),
                                     -std::sin(h * omega));
    f += phase * covs.lags[h].cast<std::complex<double>>();
    f += std::conj(phase) *
         covs.lags[h].transpose().cast<std::complex<double>>();
  }
  // Enforce Hermitian symmetry lost to rounding before eigen-analysis.
  f = 0.5 * (f + f.adjoint().eval());
  return f / (2.0 * std::numbers::pi);
}

Vector omega_grid(int size) {
  Vector omegas(size);
  for (int k = 0; k < size; ++k)
    omegas(k) = -std::numbers::pi +
                2.0 * std::numbers::pi * (k + 1) / static_cast<double>(size);
  return omegas;
}

double grid_min_eigenvalue(const LagCovSet& covs, int size) {
  const Vector omegas = omega_grid(size);
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < size; ++k)
    m = std::min(m, min_hermitian_eigenvalue(spectral_value(covs, omegas(k))));
  return m;
}

}  // namespace

SpectralDensity spectral_density(const LagCovSet& covs, int omega_grid_size) {
  if (omega_grid_size < 2)
    throw config_error("spectral_density: grid size must be at least 2");
  SpectralDensity out;
  out.omegas = omega_grid(omega_grid_size);
  out.values.reserve(omega_grid_size);
  double alpha = std::numeric_limits<double>::infinity();
  for (int k = 0; k < omega_grid_size; ++k) {
    out.values.push_back(spectral_value(covs, out.omegas(k)));
    alpha = std::min(alpha, min_hermitian_eigenvalue(out.values.back()));
  }
  // The infimum over omega is approached by doubling the grid until the
  // minimum stops moving.
  int size = omega_grid_size;
  for (int pass = 0; pass < 8; ++pass) {
    size *= 2;
    const double refined = grid_min_eigenvalue(covs, size);
    const double change = std::abs(refined - alpha);
    alpha = std::min(alpha, refined);
    if (change < 1e-8) break;
  }
  out.alpha = alpha;
  return out;
}

double spectral_duality_check(const LagCovSet& covs, const SpectralDensity& sd,
                              int h) {
  const int grid = sd.grid_size();
  const double dw = 2.0 * std::numbers::pi / grid;
  ComplexMatrix acc = ComplexMatrix::Zero(covs.dim, covs.dim);
  for (int k = 0; k < grid; ++k) {
    const std::complex<double> phase(std::cos(h * sd.omegas(k)),
                                     std::sin(h * sd.omegas(k)));
    acc += phase * sd.values[k];
  }
  acc *= dw;
  const Matrix target = covs.at_signed(h);
  const double real_err = max_abs(acc.real() - target);
  const double imag_err = acc.imag().cwiseAbs().maxCoeff();
  return std::max(real_err, imag_err);
}

CovarianceEigen covariance_eigenbasis(const Matrix& c0) {
  if (c0.rows() != c0.cols())
    throw config_error("covariance_eigenbasis: matrix not square");
  if (max_abs(c0 - c0.transpose()) > 1e-10)
    throw config_error("covariance_eigenbasis: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(c0));
  if (es.info() != Eigen::Success)
    throw numeric_error("covariance_eigenbasis: eigendecomposition failed");
  const auto dim = c0.rows();
  CovarianceEigen out;
  out.eigenvalues.resize(dim);
  out.vectors.resize(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto src = dim - 1 - j;  // ascending -> descending
    out.eigenvalues(j) = es.eigenvalues()(src);
    out.vectors.col(j) = es.eigenvectors().col(src);
  }
  if (out.eigenvalues(dim - 1) < -1e-8)
    throw numeric_error("covariance_eigenbasis: input not PSD, eigenvalue " +
                        std::to_string(out.eigenvalues(dim - 1)));
  // Sign convention: first coordinate of visible magnitude is positive.
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(out.vectors(i, j)) > 1e-12) {
        if (out.vectors(i, j) < 0.0) out.vectors.col(j) *= -1.0;
        break;
      }
    }
  }
  return out;
}

}  // namespace flip
