#include "error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace flip {

namespace {

MeanStderr reduce(const std::vector<double>& samples) {
  MeanStderr out;
  const int n = static_cast<int>(samples.size());
  if (n == 0) return out;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var = n > 1 ? var / (n - 1) : 0.0;
  out.mean = mean;
  out.stderr_ = std::sqrt(var / n);
  return out;
}

int spectral_max_lag(const LinearProcessModel& model) {
  if (has_finite_ma_order(model)) return model.order();
  // FAR(1): truncate once the geometric tail is negligible.
  const double nrm = operator_norm(model.coeffs[0]);
  if (nrm < 1e-12) return 1;
  const int h = static_cast<int>(std::ceil(std::log(1e-12) / std::log(nrm)));
  return std::clamp(h, 1, 4000);
}

}  // namespace

EigenbasisView eigenbasis_view(const LinearProcessModel& model, int max_lag) {
  validate(model);
  const int needed = std::max(max_lag, spectral_max_lag(model));
  const LagCovSet ambient = analytic_lag_cov_set(model, needed);
  const CovarianceEigen eig = covariance_eigenbasis(ambient.at(0));
  EigenbasisView out;
  out.covs = rotate_lag_set(ambient, eig.vectors);
  out.lambdas = eig.eigenvalues;
  out.rotation = eig.vectors;
  return out;
}

ErrorReport error_decomposition(const LinearProcessModel& model, int dim,
                                int n, int mc_runs, std::uint64_t seed,
                                double pivot_tol) {
  if (dim < 1 || dim > model.dim)
    throw config_error("error_decomposition: D outside [1, ambient]");
  if (n < 0) throw config_error("error_decomposition: negative n");
  const EigenbasisView view = eigenbasis_view(model, n);
  const LagCovSet covs_d = project_lag_set(view.covs, dim);
  const InnovationsStateFixedD state = innovations_fixed(covs_d, n, pivot_tol);

  ErrorReport report;
  report.dim = dim;
  report.n = n;
  report.tail_sum = view.lambdas.tail(model.dim - dim).sum();
  report.v_nuclear = nuclear_norm(state.V[n]);
  report.v_nuclear_sq = report.v_nuclear * report.v_nuclear;
  report.noise_floor = model.noise.sigma2();

  if (mc_runs > 0) {
    std::vector<double> sq(mc_runs);
    parallel_replicates(mc_runs, [&](int rep) {
      const SimulationResult sim =
          simulate(model, n + 1, split_seed(seed, rep));
      const Matrix rotated = sim.path * view.rotation;
      const Vector xhat =
          predict_fixed(state, rotated.topRows(n).leftCols(dim));
      const Vector target = rotated.row(n).transpose();
      sq[rep] = (target.head(dim) - xhat).squaredNorm() +
                target.tail(model.dim - dim).squaredNorm();
    });
    const MeanStderr ms = reduce(sq);
    report.mc_mse = ms.mean;
    report.mc_stderr = ms.stderr_;
  }
  return report;
}

std::vector<ErrorReport> noise_floor_convergence(
    const LinearProcessModel& model, int dim, const std::vector<int>& n_list,
    int mc_runs, std::uint64_t seed, double pivot_tol) {
  if (n_list.empty())
    throw config_error("noise_floor_convergence: empty n list");
  const int n_top = *std::max_element(n_list.begin(), n_list.end());
  const EigenbasisView view = eigenbasis_view(model, n_top);
  const LagCovSet covs_d = project_lag_set(view.covs, dim);
  const InnovationsStateFixedD state =
      innovations_fixed(covs_d, n_top, pivot_tol);

  std::vector<ErrorReport> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    ErrorReport r = mc_runs > 0
                        ? error_decomposition(model, dim, n, mc_runs, seed,
                                              pivot_tol)
                        : ErrorReport{};
    r.dim = dim;
    r.n = n;
    r.tail_sum = view.lambdas.tail(model.dim - dim).sum();
    r.v_nuclear = nuclear_norm(state.V[n]);
    r.v_nuclear_sq = r.v_nuclear * r.v_nuclear;
    r.noise_floor = model.noise.sigma2();
    out.push_back(std::move(r));
  }
  return out;
}

RateBound rate_bound(const InverseRepresentation& invrep,
                     const std::vector<int>& schedule, int m_n,
                     const Vector& lambdas, int n, const LagCovSet& covs_eigen,
                     int omega_grid_size) {
  if (n < 1 || n >= static_cast<int>(schedule.size()) + 1)
    throw config_error("rate_bound: n outside the schedule");
  if (m_n < 1 || m_n >= n)
    throw config_error("rate_bound: m_n must satisfy 1 <= m_n < n");
  RateBound out;
  out.n = n;
  out.m_n = m_n;
  out.d_n = schedule[n - 1];
  out.d_n_minus_m = schedule[n - m_n - 1];

  out.pi_tail = invrep.tail_bound;
  for (std::size_t j = m_n; j < invrep.pi.size(); ++j)
    out.pi_tail += operator_norm(invrep.pi[j]);

  for (int j = out.d_n_minus_m; j < lambdas.size(); ++j)
    out.lambda_tail += lambdas(j);

  out.bound = out.pi_tail + out.lambda_tail;
  const LagCovSet covs_dn = project_lag_set(covs_eigen, out.d_n);
  out.alpha = spectral_density(covs_dn, omega_grid_size).alpha;
  out.scaled = out.alpha > 0.0
                   ? out.bound / out.alpha
                   : std::numeric_limits<double>::infinity();
  return out;
}

MeanStderr excess_error_mc(const LinearProcessModel& model,
                           const std::vector<int>& schedule, int n,
                           int mc_runs, std::uint64_t seed, double pivot_tol) {
  if (static_cast<int>(schedule.size()) < n + 1)
    throw config_error("excess_error_mc: schedule shorter than n+1");
  if (mc_runs < 1) throw config_error("excess_error_mc: mc_runs must be >= 1");
  const EigenbasisView view = eigenbasis_view(model, n);
  const std::vector<int> sched(schedule.begin(), schedule.begin() + n + 1);
  const InnovationsStateIncreasing state =
      innovations_increasing(view.covs, sched, pivot_tol);
  const int target_dim = sched.back();

  std::vector<double> sq(mc_runs);
  parallel_replicates(mc_runs, [&](int rep) {
    const SimulationResult sim = simulate(model, n + 1, split_seed(seed, rep));
    const Matrix path = sim.path * view.rotation;
    const Matrix noise = sim.noise * view.rotation;
    const Vector xhat = predict_increasing(state, path.topRows(n));
    Vector resid = (path.row(n) - noise.row(n)).transpose();
    resid.head(target_dim) -= xhat;
    sq[rep] = resid.squaredNorm();
  });
  return reduce(sq);
}

ThetaConvergence theta_convergence(const LinearProcessModel& model,
                                   const std::vector<int>& schedule,
                                   const std::vector<int>& n_list, int i_max,
                                   double pivot_tol) {
  if (n_list.empty()) throw config_error("theta_convergence: empty n list");
  const int n_top = *std::max_element(n_list.begin(), n_list.end());
  if (static_cast<int>(schedule.size()) < n_top + 1)
    throw config_error("theta_convergence: schedule shorter than max n + 1");
  const EigenbasisView view = eigenbasis_view(model, n_top);
  const InnovationsStateIncreasing state = innovations_increasing(
      view.covs,
      std::vector<int>(schedule.begin(), schedule.begin() + n_top + 1),
      pivot_tol);
  const std::vector<Matrix> psi = ma_coefficients(model, i_max);

  ThetaConvergence out;
  out.n_list = n_list;
  out.i_max = i_max;
  out.distance.resize(static_cast<Eigen::Index>(n_list.size()), i_max);
  out.distance.setConstant(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t row = 0; row < n_list.size(); ++row) {
    const int n = n_list[row];
    for (int i = 1; i <= std::min(i_max, n); ++i) {
      const Matrix psi_rot =
          view.rotation.transpose() * psi[i - 1] * view.rotation;
      const int rows = state.schedule[n];
      const int cols = state.schedule[n - i];
      out.distance(row, i - 1) = operator_norm(
          state.theta[n - 1][i - 1] - psi_rot.topLeftCorner(rows, cols));
    }
  }
  return out;
}

LemmaReport lemma_checks(const LinearProcessModel& model, int dim, int n,
                         int max_lag, int omega_grid_size) {
  if (dim < 1 || dim > model.dim)
    throw config_error("lemma_checks: D outside [1, ambient]");
  const EigenbasisView view = eigenbasis_view(model, max_lag);
  LemmaReport report;

  // (a) Cauchy-Schwarz bound on eigenbasis covariance entries, all |h|.
  double excess = -std::numeric_limits<double>::infinity();
  for (int h = 0; h <= max_lag; ++h) {
    const Matrix& m = view.covs.lags[h];
    for (int l = 0; l < dim; ++l)
      for (int j = 0; j < dim; ++j)
        excess = std::max(excess,
                          std::abs(m(l, j)) -
                              std::sqrt(view.lambdas(l) * view.lambdas(j)));
  }
  report.cauchy_excess = excess;
  report.cauchy_pass = excess <= 1e-8;

  // (b) block covariance eigenvalues against the spectral floor 2 pi alpha.
  const LagCovSet covs_d = project_lag_set(view.covs, dim);
  const SpectralDensity sd = spectral_density(covs_d, omega_grid_size);
  const BlockCovariance gamma =
      assemble_block_covariance(covs_d, std::vector<int>(n, dim));
  const double min_eig = symmetric_eigenvalues(gamma.matrix)(0);
  report.block_margin = min_eig - 2.0 * std::numbers::pi * sd.alpha;
  report.block_pass = report.block_margin >= -1e-6;

  // (c) positivity of the spectral density.
  report.alpha = sd.alpha;
  report.spectral_pass = sd.alpha > 1e-10;
  return report;
}

}  // namespace flip
