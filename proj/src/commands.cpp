#include "commands.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "error_analysis.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace flip {

namespace {

std::string resolve(const std::string& flag, const std::string& config_value,
                    const char* fallback) {
  if (!flag.empty()) return flag;
  if (!config_value.empty()) return config_value;
  return fallback;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Concrete grid representation of the configured basis, used only when
/// curves are materialized on the grid.
OrthonormalBasis concrete_basis(const ExperimentConfig& cfg) {
  const Grid grid(cfg.resolution);
  switch (cfg.basis_kind) {
    case BasisKind::fourier:
      return fourier_basis(grid, cfg.model.dim);
    case BasisKind::covariance_eigenbasis: {
      const CovarianceEigen eig =
          covariance_eigenbasis(analytic_lag_cov(cfg.model, 0));
      return rotate_basis(fourier_basis(grid, cfg.model.dim), eig.vectors,
                          BasisKind::covariance_eigenbasis);
    }
    case BasisKind::user_supplied: {
      if (!cfg.basis_file)
        throw config_error("basis.file: required for a user-supplied basis");
      OrthonormalBasis basis = read_basis_file(*cfg.basis_file);
      if (basis.dimension() < cfg.model.dim)
        throw config_error("basis.file: fewer functions than model.D");
      return basis;
    }
  }
  throw config_error("basis.kind: unknown");
}

}  // namespace

void run_simulate(const ExperimentConfig& cfg, const std::string& out_path) {
  const std::string path =
      resolve(out_path, cfg.output.trajectory, "trajectory.csv");
  const SimulationResult sim = simulate(cfg.model, cfg.n_max, cfg.seed);
  if (cfg.emit_grid_values) {
    const OrthonormalBasis basis = concrete_basis(cfg);
    write_matrix_csv(path,
                     sim.path * basis.values.leftCols(cfg.model.dim).transpose());
  } else {
    write_matrix_csv(path, sim.path);
  }
  nlohmann::json meta;
  meta["model_hash"] = hex64(model_hash(cfg.model));
  meta["seed"] = cfg.seed;
  meta["n"] = cfg.n_max;
  meta["D"] = cfg.model.dim;
  meta["emit"] = cfg.emit_grid_values ? "grid" : "coordinates";
  write_text_file(path + ".meta.json", meta.dump(2) + "\n");
}

void run_predict(const ExperimentConfig& cfg,
                 const std::string& trajectory_path,
                 const std::string& out_path,
                 const std::string& dump_state_path) {
  if (trajectory_path.empty())
    throw config_error("predict: a trajectory path is required");
  const Matrix traj = read_matrix_csv(trajectory_path);
  const int ambient = cfg.model.dim;
  if (traj.cols() != ambient)
    throw config_error("predict: trajectory has " +
                       std::to_string(traj.cols()) +
                       " coordinates, config model.D is " +
                       std::to_string(ambient));
  const int n = static_cast<int>(traj.rows());

  // Everything runs in the configured basis; the eigenbasis case rotates
  // data in and predictions back out.
  Matrix rotation = Matrix::Identity(ambient, ambient);
  LagCovSet covs = analytic_lag_cov_set(cfg.model, n);
  if (cfg.basis_kind == BasisKind::covariance_eigenbasis) {
    const CovarianceEigen eig = covariance_eigenbasis(covs.at(0));
    rotation = eig.vectors;
    covs = rotate_lag_set(covs, rotation);
  }
  const Matrix data = traj * rotation;

  PredictionSeries series;
  int predictor_dim = cfg.basis_dim;
  if (cfg.algorithm == AlgorithmKind::increasing) {
    const std::vector<int> schedule = cfg.schedule.realize(n + 1);
    const InnovationsStateIncreasing state =
        innovations_increasing(covs, schedule, cfg.pivot_tol);
    series = predict_series_increasing(state, data);
    predictor_dim = schedule.back();
    if (!dump_state_path.empty()) dump_state(dump_state_path, state);
  } else {
    const LagCovSet covs_d = project_lag_set(covs, cfg.basis_dim);
    InnovationsStateFixedD state;
    if (cfg.algorithm == AlgorithmKind::fma) {
      const int q_star =
          cfg.q_star ? *cfg.q_star : detect_fma_order(covs_d, cfg.model.order());
      state = innovations_fma(covs_d, q_star, n, cfg.pivot_tol);
    } else {
      state = innovations_fixed(covs_d, n, cfg.pivot_tol);
    }
    series = predict_series_fixed(state, data.leftCols(cfg.basis_dim));
    if (!dump_state_path.empty()) dump_state(dump_state_path, state);
  }

  // Embed predictions into ambient coordinates and undo the rotation.
  Matrix embedded = Matrix::Zero(n + 1, ambient);
  embedded.leftCols(predictor_dim) = series.predictions.leftCols(predictor_dim);
  embedded = embedded * rotation.transpose();

  const std::string path =
      resolve(out_path, cfg.output.predictions, "predictions.csv");
  std::ostringstream out;
  out << "n";
  for (int c = 1; c <= ambient; ++c) out << ",xhat_" << c;
  out << ",innovation_norm\n";
  for (int t = 1; t <= n + 1; ++t) {
    out << t;
    for (int c = 0; c < ambient; ++c)
      out << ',' << format_full(embedded(t - 1, c));
    out << ',' << (t <= n ? format_full(series.innovation_norms(t - 1)) : "nan");
    out << '\n';
  }
  write_text_file(path, out.str());
}

void run_study(const ExperimentConfig& cfg, const std::string& out_dir,
               OutputFormat format) {
  if (cfg.basis_kind != BasisKind::covariance_eigenbasis)
    throw config_error("basis.kind: study requires covariance-eigenbasis");
  const std::string dir = resolve(out_dir, cfg.output.study_dir, ".");
  std::filesystem::create_directories(dir);
  const char* ext = format == OutputFormat::csv ? ".csv" : ".txt";

  // Prediction-error decomposition over the (D, n) grid.
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"D", "n", "tail_sum", "v_nuclear", "v_nuclear_sq", "mc_mse",
                  "mc_stderr", "residual", "noise_floor"});
  std::uint64_t cell = 0;
  for (int dim : cfg.study.dim_grid) {
    for (int n : cfg.study.n_grid) {
      const ErrorReport r = error_decomposition(
          cfg.model, dim, n, cfg.mc_runs, split_seed(cfg.seed, cell++),
          cfg.pivot_tol);
      rows.push_back({std::to_string(r.dim), std::to_string(r.n),
                      format_full(r.tail_sum), format_full(r.v_nuclear),
                      format_full(r.v_nuclear_sq), format_full(r.mc_mse),
                      format_full(r.mc_stderr), format_full(r.residual()),
                      format_full(r.noise_floor)});
    }
  }
  write_report(dir + "/decomposition" + ext, format, rows);

  // Rate bounds need a certified inverse representation; models without one
  // get an empty table.
  rows.clear();
  rows.push_back({"n", "m_n", "d_n", "d_n_minus_m", "pi_tail", "lambda_tail",
                  "bound", "alpha", "scaled", "excess_mean", "excess_stderr"});
  const bool invertible_kind =
      cfg.model.kind == ModelKind::far1 ||
      (cfg.model.kind == ModelKind::fma && cfg.model.order() <= 1 &&
       (cfg.model.order() == 0 || operator_norm(cfg.model.coeffs[0]) < 1.0));
  if (invertible_kind) {
    const int n_top =
        *std::max_element(cfg.study.n_grid.begin(), cfg.study.n_grid.end());
    const InverseRepresentation invrep =
        inverse_representation(cfg.model, n_top);
    const EigenbasisView view = eigenbasis_view(cfg.model, n_top);
    ScheduleSpec dim_schedule = cfg.schedule;
    if (cfg.algorithm != AlgorithmKind::increasing) {
      dim_schedule.kind = ScheduleSpec::Kind::constant;
      dim_schedule.value = cfg.basis_dim;
    }
    std::uint64_t stream = 1u << 20;
    for (int n : cfg.study.n_grid) {
      if (n < 2) continue;
      const int m_n = std::clamp(cfg.study.m_of_n.at(n), 1, n - 1);
      const std::vector<int> schedule = dim_schedule.realize(n + 1);
      const RateBound rb = rate_bound(invrep, schedule, m_n, view.lambdas, n,
                                      view.covs, cfg.omega_grid);
      const MeanStderr excess =
          cfg.mc_runs > 0
              ? excess_error_mc(cfg.model, schedule, n, cfg.mc_runs,
                                split_seed(cfg.seed, stream++), cfg.pivot_tol)
              : MeanStderr{};
      rows.push_back({std::to_string(rb.n), std::to_string(rb.m_n),
                      std::to_string(rb.d_n), std::to_string(rb.d_n_minus_m),
                      format_full(rb.pi_tail), format_full(rb.lambda_tail),
                      format_full(rb.bound), format_full(rb.alpha),
                      format_full(rb.scaled), format_full(excess.mean),
                      format_full(excess.stderr_)});
    }
  }
  write_report(dir + "/rate_bounds" + ext, format, rows);

  // Plot-ready spectral density of the projected subprocess.
  const EigenbasisView spectral_view =
      eigenbasis_view(cfg.model, cfg.study.lag_window);
  write_spectral_csv(
      dir + "/spectral.csv",
      spectral_density(project_lag_set(spectral_view.covs, cfg.basis_dim),
                       cfg.omega_grid));

  // Lemma checks are data, not assertions: failures land in the report and
  // the command still exits 0.
  const int lemma_n = std::min(cfg.n_max, 10);
  const LemmaReport lemmas =
      lemma_checks(cfg.model, cfg.basis_dim, lemma_n, cfg.study.lag_window,
                   cfg.omega_grid);
  rows.clear();
  rows.push_back({"lemma", "status", "margin"});
  rows.push_back({"cauchy-schwarz", lemmas.cauchy_pass ? "pass" : "fail",
                  format_full(lemmas.cauchy_excess)});
  rows.push_back({"block-eigenvalue", lemmas.block_pass ? "pass" : "fail",
                  format_full(lemmas.block_margin)});
  rows.push_back({"spectral-positivity",
                  lemmas.spectral_pass ? "pass" : "fail",
                  format_full(lemmas.alpha)});
  write_report(dir + "/lemmas" + ext, format, rows);
}

void run_validate(const ExperimentConfig& cfg) { validate_config(cfg); }

}  // namespace flip
