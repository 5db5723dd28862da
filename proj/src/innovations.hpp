#pragma once

#include <vector>

#include "covariance.hpp"
#include "linalg.hpp"

namespace flip {

// One-step best linear prediction by the Innovations Algorithm, driven by
// lag covariances. theta[n][i] maps the innovation at time n+1-i into the
// prediction of X_{n+1}; V[n] is the covariance of the innovation at time
// n+1. Recursion order: V_0, theta_{1,1}, V_1, theta_{2,2}, theta_{2,1}, ...

struct InnovationsStateFixedD {
  int dim = 0;
  int n_max = 0;
  /// q* when built by the sparse FMA recursion, -1 for the full recursion.
  int sparse_order = -1;
  /// theta[n-1] holds row n; entry i-1 is theta_{n,i}. Sparse rows with
  /// n > q* store only i = 1..q*; the rest are implicitly zero.
  std::vector<std::vector<Matrix>> theta;
  std::vector<Matrix> V;  // V[0..n_max]

  Matrix theta_at(int n, int i) const;
  bool theta_stored(int n, int i) const;
};

/// Full recursion at fixed dimension. `covs` must already live at the target
/// dimension (project first). Fails loudly, naming the step, when a V block
/// falls below pivot_tol relative to its largest eigenvalue.
InnovationsStateFixedD innovations_fixed(const LagCovSet& covs, int n_max,
                                         double pivot_tol);

/// Sparse recursion for processes whose lag covariances vanish beyond
/// q_star: only q_star diagonals of theta are computed once n > q_star.
/// Output is interchangeable with innovations_fixed.
InnovationsStateFixedD innovations_fma(const LagCovSet& covs, int q_star,
                                       int n_max, double pivot_tol);

/// Largest lag j <= q with a nonvanishing projected covariance, else 0.
int detect_fma_order(const LagCovSet& covs, int q);

/// One-step prediction of X_{n+1} from n observed coordinate rows by forward
/// substitution of innovations. n = 0 gives the zero vector.
Vector predict_fixed(const InnovationsStateFixedD& state,
                     const Matrix& observations);

/// All one-step predictions xhat_1..xhat_{n+1} (rows) plus the innovation
/// norms ||x_t - xhat_t|| for t = 1..n.
struct PredictionSeries {
  Matrix predictions;       // (n+1) x dim
  Vector innovation_norms;  // n
};

PredictionSeries predict_series_fixed(const InnovationsStateFixedD& state,
                                      const Matrix& observations);

// Increasing-subspace variant: the algorithm runs on the projected history
// (X_{d_1,1}, ..., X_{d_n,n}) with nondecreasing dimensions d_i, so the theta
// blocks are genuinely rectangular and are stored that way.

struct InnovationsStateIncreasing {
  std::vector<int> schedule;  // d_1..d_{n_max+1}
  int n_max = 0;
  /// theta[n-1][i-1] is d_{n+1} x d_{n+1-i}.
  std::vector<std::vector<Matrix>> theta;
  std::vector<Matrix> V;  // V[n] is d_{n+1} x d_{n+1}, n = 0..n_max
};

/// `covs` is the full-dimension set; projections are taken per block.
InnovationsStateIncreasing innovations_increasing(const LagCovSet& covs,
                                                  const std::vector<int>& schedule,
                                                  double pivot_tol);

/// Prediction of X_{d_{n+1},n+1}; observation rows carry at least
/// max(schedule) coordinates and are projected per step.
Vector predict_increasing(const InnovationsStateIncreasing& state,
                          const Matrix& observations);

PredictionSeries predict_series_increasing(const InnovationsStateIncreasing& state,
                                           const Matrix& observations);

/// Direct solve of the prediction normal equations on the stacked history
/// gram matrix: the independent oracle for both recursions. beta[i-1]
/// multiplies X_{d_{n+1-i},n+1-i}.
struct OracleCoefficients {
  std::vector<int> dims;  // time order d_1..d_n
  int target_dim = 0;
  std::vector<Matrix> beta;
};

OracleCoefficients oracle_best_linear_predictor(const LagCovSet& covs,
                                                const std::vector<int>& dims,
                                                int target_dim,
                                                double pivot_tol);

Vector oracle_predict(const OracleCoefficients& oracle,
                      const Matrix& observations);

/// Largest entrywise residual of the identity
/// theta_{n,i} = sum_{j<=i} beta_{n,j} theta_{n-j,i-j} (theta_{.,m,0} = I)
/// between the increasing-subspace state and per-n oracle coefficients.
double beta_theta_link_check(const InnovationsStateIncreasing& state,
                             const LagCovSet& covs, double pivot_tol);

}  // namespace flip
