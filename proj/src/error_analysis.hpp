#pragma once

#include <cstdint>
#include <vector>

#include "covariance.hpp"
#include "innovations.hpp"
#include "process.hpp"

namespace flip {

// Prediction-error decomposition and convergence diagnostics. Everything
// here works in the covariance eigenbasis of the model: lag covariances are
// rotated so that C_{X;0} is diagonal with nonincreasing eigenvalues, and
// projections truncate to the leading coordinates.

constexpr double kDefaultPivotTol = 1e-10;

struct ErrorReport {
  int dim = 0;  // projection dimension D
  int n = 0;
  double tail_sum = 0.0;       // sum_{i>D} lambda_i
  double v_nuclear = 0.0;      // ||V_{D,n}||_N
  double v_nuclear_sq = 0.0;   // the squared variant, reported alongside
  double mc_mse = 0.0;         // Monte Carlo estimate of E||X_{n+1}-Xhat||^2
  double mc_stderr = 0.0;
  double noise_floor = 0.0;    // ||C_eps||_N = E||eps_0||^2

  double residual() const { return mc_mse - tail_sum - v_nuclear; }
};

/// Rotation of a model's analytic covariances into its eigenbasis, shared by
/// the diagnostics below.
struct EigenbasisView {
  LagCovSet covs;      // rotated, full ambient dimension
  Vector lambdas;      // descending eigenvalues of C_{X;0}
  Matrix rotation;     // columns: eigenvectors in model coordinates
};

EigenbasisView eigenbasis_view(const LinearProcessModel& model, int max_lag);

/// Tail + statistical decomposition at projection dimension D and sample
/// size n, with mc_runs simulated trajectories (0 skips the Monte Carlo).
ErrorReport error_decomposition(const LinearProcessModel& model, int dim,
                                int n, int mc_runs, std::uint64_t seed,
                                double pivot_tol = kDefaultPivotTol);

/// v_nuclear over a whole n grid from a single recursion pass.
std::vector<ErrorReport> noise_floor_convergence(
    const LinearProcessModel& model, int dim, const std::vector<int>& n_list,
    int mc_runs, std::uint64_t seed, double pivot_tol = kDefaultPivotTol);

struct RateBound {
  int n = 0;
  int m_n = 0;
  int d_n = 0;
  int d_n_minus_m = 0;
  double pi_tail = 0.0;      // sum_{j>m_n} ||pi_j||_L plus the declared tail
  double lambda_tail = 0.0;  // sum_{j>d_{n-m_n}} lambda_j
  double bound = 0.0;        // pi_tail + lambda_tail
  double alpha = 0.0;        // infimum eigenvalue of the d_n spectral density
  double scaled = 0.0;       // bound / alpha
};

/// Evaluates the prediction-error rate expression at one n. `covs_eigen` is
/// the rotated lag set (long enough for a trustworthy spectral density).
RateBound rate_bound(const InverseRepresentation& invrep,
                     const std::vector<int>& schedule, int m_n,
                     const Vector& lambdas, int n, const LagCovSet& covs_eigen,
                     int omega_grid_size);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Monte Carlo estimate of E||X_{n+1} - Xhat_{d_{n+1},n+1} - eps_{n+1}||^2
/// for the increasing-subspace predictor; the simulator exposes the true
/// noise per trajectory.
MeanStderr excess_error_mc(const LinearProcessModel& model,
                           const std::vector<int>& schedule, int n,
                           int mc_runs, std::uint64_t seed,
                           double pivot_tol = kDefaultPivotTol);

/// Operator-norm distances ||theta_{d_{n+1-i},n,i} - P psi_i P|| for i =
/// 1..i_max and each n in n_list, from one increasing-subspace pass.
struct ThetaConvergence {
  std::vector<int> n_list;
  int i_max = 0;
  Matrix distance;  // n_list.size() x i_max
};

ThetaConvergence theta_convergence(const LinearProcessModel& model,
                                   const std::vector<int>& schedule,
                                   const std::vector<int>& n_list, int i_max,
                                   double pivot_tol = kDefaultPivotTol);

/// Executable checks of the supporting lemmas, reported with worst-case
/// margins rather than thrown.
struct LemmaReport {
  // (a) |<C_{X;h} nu_j, nu_l>| <= sqrt(lambda_j lambda_l): worst excess.
  double cauchy_excess = 0.0;
  bool cauchy_pass = false;
  // (b) min eig of the block covariance >= 2 pi alpha_D: min_eig - 2 pi alpha.
  double block_margin = 0.0;
  bool block_pass = false;
  // (c) all spectral density eigenvalues positive.
  double alpha = 0.0;
  bool spectral_pass = false;
};

LemmaReport lemma_checks(const LinearProcessModel& model, int dim, int n,
                         int max_lag, int omega_grid_size);

}  // namespace flip
