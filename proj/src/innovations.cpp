#include "innovations.hpp"

#include <string>

#include "errors.hpp"

namespace flip {

namespace {

constexpr double kZeroLagTol = 1e-10;

std::string step_name(const char* what, int n) {
  return std::string(what) + " at step n=" + std::to_string(n);
}

bool degenerate_input(const LagCovSet& covs) {
  return nuclear_norm(covs.lags[0]) == 0.0;
}

}  // namespace

Matrix InnovationsStateFixedD::theta_at(int n, int i) const {
  if (theta_stored(n, i)) return theta[n - 1][i - 1];
  return Matrix::Zero(dim, dim);
}

bool InnovationsStateFixedD::theta_stored(int n, int i) const {
  return n >= 1 && n <= n_max && i >= 1 &&
         i <= static_cast<int>(theta[n - 1].size());
}

InnovationsStateFixedD innovations_fixed(const LagCovSet& covs, int n_max,
                                         double pivot_tol) {
  if (n_max < 0) throw config_error("innovations_fixed: negative n_max");
  const int dim = covs.dim;
  InnovationsStateFixedD state;
  state.dim = dim;
  state.n_max = n_max;
  state.theta.resize(n_max);
  state.V.reserve(n_max + 1);

  if (degenerate_input(covs)) {
    // Nothing to predict; avoid 0 * 0^{-1} in the recursion.
    for (int n = 0; n <= n_max; ++n) state.V.push_back(Matrix::Zero(dim, dim));
    for (int n = 1; n <= n_max; ++n)
      state.theta[n - 1].assign(n, Matrix::Zero(dim, dim));
    return state;
  }

  std::vector<Matrix> vinv;
  auto push_v = [&](Matrix v, int n) {
    v = symmetrize(v);
    vinv.push_back(
        invert_symmetric(v, pivot_tol, step_name("innovations V", n).c_str())
            .inverse);
    state.V.push_back(std::move(v));
  };

  push_v(covs.at(0), 0);
  for (int n = 1; n <= n_max; ++n) {
    auto& row = state.theta[n - 1];
    row.assign(n, Matrix());
    for (int k = 0; k < n; ++k) {
      const int lag = n - k;
      Matrix m = covs.at(lag);
      for (int j = 0; j < k; ++j)
        m -= row[n - j - 1] * state.V[j] * state.theta[k - 1][k - j - 1].transpose();
      row[lag - 1] = m * vinv[k];
    }
    Matrix v = covs.at(0);
    for (int j = 0; j < n; ++j)
      v -= row[n - j - 1] * state.V[j] * row[n - j - 1].transpose();
    push_v(std::move(v), n);
  }
  return state;
}

InnovationsStateFixedD innovations_fma(const LagCovSet& covs, int q_star,
                                       int n_max, double pivot_tol) {
  if (q_star < 0) throw config_error("innovations_fma: negative q_star");
  for (int h = q_star + 1; h <= covs.max_lag(); ++h)
    if (operator_norm(covs.lags[h]) > kZeroLagTol)
      throw config_error("innovations_fma: lag " + std::to_string(h) +
                         " covariance nonzero beyond q*=" +
                         std::to_string(q_star));
  const int dim = covs.dim;
  InnovationsStateFixedD state;
  state.dim = dim;
  state.n_max = n_max;
  state.sparse_order = q_star;
  state.theta.resize(n_max);
  state.V.reserve(n_max + 1);

  if (degenerate_input(covs)) {
    for (int n = 0; n <= n_max; ++n) state.V.push_back(Matrix::Zero(dim, dim));
    for (int n = 1; n <= n_max; ++n)
      state.theta[n - 1].assign(std::min(n, q_star), Matrix::Zero(dim, dim));
    return state;
  }

  std::vector<Matrix> vinv;
  auto push_v = [&](Matrix v, int n) {
    v = symmetrize(v);
    vinv.push_back(
        invert_symmetric(v, pivot_tol, step_name("innovations V", n).c_str())
            .inverse);
    state.V.push_back(std::move(v));
  };

  push_v(covs.at(0), 0);
  for (int n = 1; n <= n_max; ++n) {
    auto& row = state.theta[n - 1];
    const int lags_kept = std::min(n, q_star);
    row.assign(lags_kept, Matrix());
    // Only lags <= q* can be nonzero; earlier coefficients in the sum that
    // would multiply a vanished theta are skipped outright.
    for (int lag = lags_kept; lag >= 1; --lag) {
      const int k = n - lag;
      Matrix m = covs.at(lag);
      const int j_start = std::max(0, n - q_star);
      for (int j = j_start; j < k; ++j) {
        const Matrix& theta_nj = row[n - j - 1];
        if (state.theta_stored(k, k - j))
          m -= theta_nj * state.V[j] *
               state.theta[k - 1][k - j - 1].transpose();
      }
      row[lag - 1] = m * vinv[k];
    }
    Matrix v = covs.at(0);
    for (int i = 1; i <= lags_kept; ++i)
      v -= row[i - 1] * state.V[n - i] * row[i - 1].transpose();
    push_v(std::move(v), n);
  }
  return state;
}

int detect_fma_order(const LagCovSet& covs, int q) {
  for (int j = std::min(q, covs.max_lag()); j >= 1; --j)
    if (operator_norm(covs.lags[j]) > kZeroLagTol) return j;
  return 0;
}

namespace {

// Shared forward substitution; `project` trims each observation/prediction
// to the per-step dimension (identity for the fixed-D state).
template <class ThetaAt, class DimAt>
PredictionSeries run_prediction(const Matrix& observations, int n_max,
                                int out_dim, ThetaAt&& theta_at,
                                DimAt&& dim_at) {
  const int n = static_cast<int>(observations.rows());
  if (n > n_max)
    throw config_error("predict: " + std::to_string(n) +
                       " observations exceed the computed state n_max=" +
                       std::to_string(n_max));
  PredictionSeries out;
  out.predictions = Matrix::Zero(n + 1, out_dim);
  out.innovation_norms = Vector::Zero(n);
  std::vector<Vector> innovations(n);
  Vector xhat = Vector::Zero(dim_at(1));
  for (int t = 1; t <= n + 1; ++t) {
    out.predictions.row(t - 1).head(xhat.size()) = xhat.transpose();
    if (t > n) break;
    const int dt = dim_at(t);
    if (observations.cols() < dt)
      throw config_error("predict: observation has fewer coordinates than "
                         "the step dimension");
    innovations[t - 1] =
        observations.row(t - 1).head(dt).transpose() - xhat;
    out.innovation_norms(t - 1) = innovations[t - 1].norm();
    xhat = Vector::Zero(dim_at(t + 1));
    for (int i = 1; i <= t; ++i) {
      const Matrix th = theta_at(t, i);
      if (th.size() > 0) xhat += th * innovations[t - i];
    }
  }
  return out;
}

}  // namespace

PredictionSeries predict_series_fixed(const InnovationsStateFixedD& state,
                                      const Matrix& observations) {
  if (observations.rows() > 0 && observations.cols() != state.dim)
    throw config_error("predict: observation dimension " +
                       std::to_string(observations.cols()) +
                       " does not match state dimension " +
                       std::to_string(state.dim));
  return run_prediction(
      observations, state.n_max, state.dim,
      [&](int t, int i) -> Matrix {
        return state.theta_stored(t, i) ? state.theta[t - 1][i - 1] : Matrix();
      },
      [&](int) { return state.dim; });
}

Vector predict_fixed(const InnovationsStateFixedD& state,
                     const Matrix& observations) {
  const PredictionSeries s = predict_series_fixed(state, observations);
  return s.predictions.row(observations.rows()).transpose();
}

InnovationsStateIncreasing innovations_increasing(
    const LagCovSet& covs, const std::vector<int>& schedule, double pivot_tol) {
  if (schedule.empty())
    throw config_error("innovations_increasing: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || schedule[i] > covs.dim)
      throw config_error("innovations_increasing: schedule entry " +
                         std::to_string(i + 1) + " outside [1, " +
                         std::to_string(covs.dim) + "]");
    if (i > 0 && schedule[i] < schedule[i - 1])
      throw config_error("innovations_increasing: schedule not nondecreasing "
                         "at entry " + std::to_string(i + 1));
  }
  InnovationsStateIncreasing state;
  state.schedule = schedule;
  state.n_max = static_cast<int>(schedule.size()) - 1;
  state.theta.resize(state.n_max);
  state.V.reserve(state.n_max + 1);
  auto d = [&](int t) { return schedule[t - 1]; };  // d_t, t = 1..n_max+1

  if (degenerate_input(covs)) {
    for (int n = 0; n <= state.n_max; ++n)
      state.V.push_back(Matrix::Zero(d(n + 1), d(n + 1)));
    for (int n = 1; n <= state.n_max; ++n) {
      state.theta[n - 1].resize(n);
      for (int i = 1; i <= n; ++i)
        state.theta[n - 1][i - 1] = Matrix::Zero(d(n + 1), d(n + 1 - i));
    }
    return state;
  }

  std::vector<Matrix> vinv;
  auto push_v = [&](Matrix v, int n) {
    v = symmetrize(v);
    vinv.push_back(invert_symmetric(
                       v, pivot_tol,
                       step_name("increasing innovations V", n).c_str())
                       .inverse);
    state.V.push_back(std::move(v));
  };

  push_v(covs.at(0).topLeftCorner(d(1), d(1)), 0);
  for (int n = 1; n <= state.n_max; ++n) {
    auto& row = state.theta[n - 1];
    row.assign(n, Matrix());
    for (int k = 0; k < n; ++k) {
      const int lag = n - k;
      Matrix m = covs.at(lag).topLeftCorner(d(n + 1), d(k + 1));
      for (int j = 0; j < k; ++j)
        m -= row[n - j - 1] * state.V[j] *
             state.theta[k - 1][k - j - 1].transpose();
      row[lag - 1] = m * vinv[k];
    }
    Matrix v = covs.at(0).topLeftCorner(d(n + 1), d(n + 1));
    for (int j = 0; j < n; ++j)
      v -= row[n - j - 1] * state.V[j] * row[n - j - 1].transpose();
    push_v(std::move(v), n);
  }
  return state;
}

PredictionSeries predict_series_increasing(
    const InnovationsStateIncreasing& state, const Matrix& observations) {
  const int out_dim = state.schedule.back();
  return run_prediction(
      observations, state.n_max, out_dim,
      [&](int t, int i) -> Matrix { return state.theta[t - 1][i - 1]; },
      [&](int t) { return state.schedule[t - 1]; });
}

Vector predict_increasing(const InnovationsStateIncreasing& state,
                          const Matrix& observations) {
  const PredictionSeries s = predict_series_increasing(state, observations);
  const int n = static_cast<int>(observations.rows());
  return s.predictions.row(n).head(state.schedule[n]).transpose();
}

OracleCoefficients oracle_best_linear_predictor(const LagCovSet& covs,
                                                const std::vector<int>& dims,
                                                int target_dim,
                                                double pivot_tol) {
  if (target_dim < 1 || target_dim > covs.dim)
    throw config_error("oracle: target dimension outside the set");
  const BlockCovariance gram = assemble_block_covariance(covs, dims);
  const int n = static_cast<int>(dims.size());
  const int total = gram.total_dim();
  Matrix rhs(target_dim, total);
  int offset = 0;
  for (int i = 1; i <= n; ++i) {  // stack position i holds time n+1-i, lag i
    const int di = dims[n - i];
    rhs.block(0, offset, target_dim, di) =
        covs.at(i).topLeftCorner(target_dim, di);
    offset += di;
  }
  const Matrix gram_inv =
      invert_symmetric(gram.matrix, pivot_tol, "oracle gram system").inverse;
  const Matrix b = rhs * gram_inv;
  OracleCoefficients out;
  out.dims = dims;
  out.target_dim = target_dim;
  offset = 0;
  for (int i = 1; i <= n; ++i) {
    const int di = dims[n - i];
    out.beta.push_back(b.block(0, offset, target_dim, di));
    offset += di;
  }
  return out;
}

Vector oracle_predict(const OracleCoefficients& oracle,
                      const Matrix& observations) {
  const int n = static_cast<int>(oracle.dims.size());
  if (observations.rows() != n)
    throw config_error("oracle_predict: observation count does not match");
  Vector xhat = Vector::Zero(oracle.target_dim);
  for (int i = 1; i <= n; ++i)
    xhat += oracle.beta[i - 1] *
            observations.row(n - i).head(oracle.dims[n - i]).transpose();
  return xhat;
}

double beta_theta_link_check(const InnovationsStateIncreasing& state,
                             const LagCovSet& covs, double pivot_tol) {
  double worst = 0.0;
  auto d = [&](int t) { return state.schedule[t - 1]; };
  for (int n = 1; n <= state.n_max; ++n) {
    const std::vector<int> dims(state.schedule.begin(),
                                state.schedule.begin() + n);
    const OracleCoefficients oracle =
        oracle_best_linear_predictor(covs, dims, d(n + 1), pivot_tol);
    for (int i = 1; i <= n; ++i) {
      Matrix rhs = Matrix::Zero(d(n + 1), d(n + 1 - i));
      for (int j = 1; j <= i; ++j) {
        if (i == j)
          rhs += oracle.beta[j - 1];  // theta_{., n-j, 0} is the identity
        else
          rhs += oracle.beta[j - 1] * state.theta[n - j - 1][i - j - 1];
      }
      worst = std::max(worst, max_abs(state.theta[n - 1][i - 1] - rhs));
    }
  }
  return worst;
}

}  // namespace flip
