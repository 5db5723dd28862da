#include "flip/flip.h"

#include <cstring>
#include <memory>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "innovations.hpp"

// The C boundary: exceptions become status codes, C++ objects hide behind
// opaque handles, and the last error string lives in thread-local storage.

struct flip_config {
  flip::ExperimentConfig cfg;
};

struct flip_predictor {
  flip::InnovationsStateFixedD state;
  flip::Matrix rotation;  // identity unless the config asked for the eigenbasis
  int ambient = 0;
};

namespace {

thread_local std::string g_last_error;

flip_status set_error(flip_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class Fn>
flip_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FLIP_OK;
  } catch (const flip::config_error& e) {
    return set_error(FLIP_ERR_CONFIG, e.what());
  } catch (const flip::numeric_error& e) {
    return set_error(FLIP_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return set_error(FLIP_ERR_CONFIG, e.what());
  } catch (...) {
    return set_error(FLIP_ERR_CONFIG, "unknown error");
  }
}

std::string or_empty(const char* s) { return s ? s : ""; }

}  // namespace

extern "C" {

const char* flip_version(void) { return "0.1.0"; }

const char* flip_last_error(void) { return g_last_error.c_str(); }

flip_status flip_config_open(const char* path, flip_config** out) {
  if (!path || !out) return set_error(FLIP_ERR_USAGE, "null argument");
  return guarded([&] {
    auto handle = new flip_config{flip::load_config_file(path)};
    *out = handle;
  });
}

flip_status flip_config_parse(const char* json_text, flip_config** out) {
  if (!json_text || !out) return set_error(FLIP_ERR_USAGE, "null argument");
  return guarded([&] {
    auto handle = new flip_config{flip::parse_config(json_text)};
    *out = handle;
  });
}

flip_status flip_config_validate(const flip_config* config) {
  if (!config) return set_error(FLIP_ERR_USAGE, "null config");
  return guarded([&] { flip::validate_config(config->cfg); });
}

void flip_config_set_seed(flip_config* config, uint64_t seed) {
  if (config) config->cfg.seed = seed;
}

void flip_config_close(flip_config* config) { delete config; }

flip_status flip_cmd_simulate(const flip_config* config, const char* out_csv) {
  if (!config) return set_error(FLIP_ERR_USAGE, "null config");
  return guarded([&] { flip::run_simulate(config->cfg, or_empty(out_csv)); });
}

flip_status flip_cmd_predict(const flip_config* config,
                             const char* trajectory_csv, const char* out_csv,
                             const char* dump_state_path) {
  if (!config || !trajectory_csv)
    return set_error(FLIP_ERR_USAGE, "null argument");
  return guarded([&] {
    flip::run_predict(config->cfg, trajectory_csv, or_empty(out_csv),
                      or_empty(dump_state_path));
  });
}

flip_status flip_cmd_study(const flip_config* config, const char* out_dir,
                           const char* format) {
  if (!config) return set_error(FLIP_ERR_USAGE, "null config");
  return guarded([&] {
    flip::run_study(config->cfg, or_empty(out_dir),
                    flip::output_format_from_string(format ? format : "csv"));
  });
}

flip_status flip_cmd_validate(const flip_config* config) {
  if (!config) return set_error(FLIP_ERR_USAGE, "null config");
  return guarded([&] { flip::run_validate(config->cfg); });
}

flip_status flip_predictor_create(const flip_config* config, int n_max,
                                  flip_predictor** out) {
  if (!config || !out) return set_error(FLIP_ERR_USAGE, "null argument");
  if (n_max < 0) return set_error(FLIP_ERR_USAGE, "negative n_max");
  return guarded([&] {
    const flip::ExperimentConfig& cfg = config->cfg;
    flip::LagCovSet covs = flip::analytic_lag_cov_set(cfg.model, n_max);
    flip::Matrix rotation =
        flip::Matrix::Identity(cfg.model.dim, cfg.model.dim);
    if (cfg.basis_kind == flip::BasisKind::covariance_eigenbasis) {
      rotation = flip::covariance_eigenbasis(covs.at(0)).vectors;
      covs = flip::rotate_lag_set(covs, rotation);
    }
    covs = flip::project_lag_set(covs, cfg.basis_dim);
    auto handle = std::make_unique<flip_predictor>();
    handle->state = flip::innovations_fixed(covs, n_max, cfg.pivot_tol);
    handle->rotation = std::move(rotation);
    handle->ambient = cfg.model.dim;
    *out = handle.release();
  });
}

flip_status flip_predictor_create_from_covs(int dim, int max_lag,
                                            const double* covs, int n_max,
                                            double pivot_tol,
                                            flip_predictor** out) {
  if (!covs || !out) return set_error(FLIP_ERR_USAGE, "null argument");
  if (dim < 1 || max_lag < 0 || n_max < 0)
    return set_error(FLIP_ERR_USAGE, "bad dimensions");
  return guarded([&] {
    flip::LagCovSet set;
    set.dim = dim;
    for (int h = 0; h <= max_lag; ++h) {
      flip::Matrix m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          m(r, c) = covs[(static_cast<size_t>(h) * dim + r) * dim + c];
      set.lags.push_back(std::move(m));
    }
    auto handle = std::make_unique<flip_predictor>();
    handle->state = flip::innovations_fixed(set, n_max, pivot_tol);
    handle->rotation = flip::Matrix::Identity(dim, dim);
    handle->ambient = dim;
    *out = handle.release();
  });
}

int flip_predictor_dim(const flip_predictor* predictor) {
  return predictor ? predictor->ambient : 0;
}

flip_status flip_predictor_predict(const flip_predictor* predictor,
                                   const double* observations, int n,
                                   double* out) {
  if (!predictor || !out || (n > 0 && !observations))
    return set_error(FLIP_ERR_USAGE, "null argument");
  return guarded([&] {
    const int ambient = predictor->ambient;
    flip::Matrix obs(n, ambient);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < ambient; ++c)
        obs(r, c) = observations[static_cast<size_t>(r) * ambient + c];
    const flip::Matrix rotated = obs * predictor->rotation;
    const flip::Vector xhat = flip::predict_fixed(
        predictor->state, rotated.leftCols(predictor->state.dim));
    flip::Vector embedded = flip::Vector::Zero(ambient);
    embedded.head(predictor->state.dim) = xhat;
    embedded = predictor->rotation * embedded;
    for (int c = 0; c < ambient; ++c) out[c] = embedded(c);
  });
}

flip_status flip_predictor_error_nuclear(const flip_predictor* predictor,
                                         int n, double* out) {
  if (!predictor || !out) return set_error(FLIP_ERR_USAGE, "null argument");
  if (n < 0 || n > predictor->state.n_max)
    return set_error(FLIP_ERR_USAGE, "n outside [0, n_max]");
  return guarded([&] { *out = flip::nuclear_norm(predictor->state.V[n]); });
}

void flip_predictor_close(flip_predictor* predictor) { delete predictor; }

}  // extern "C"
