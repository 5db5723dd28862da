#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hilbert.hpp"
#include "process.hpp"

namespace flip {

/// Whitelisted d_n schedules. Anything richer than these is rejected so that
/// config files stay reproducible.
struct ScheduleSpec {
  enum class Kind { constant, floor_log, floor_sqrt, explicit_list };
  Kind kind = Kind::constant;
  int value = 1;            // constant dimension
  int cap = 0;              // upper clamp for the growing kinds
  std::vector<int> values;  // explicit list

  /// d_n for n >= 1.
  int at(int n) const;
  /// d_1..d_count, validated nondecreasing and positive.
  std::vector<int> realize(int count) const;
};

enum class AlgorithmKind { fixed, fma, increasing };
const char* to_string(AlgorithmKind kind);

struct OutputPaths {
  std::string trajectory;   // default "trajectory.csv"
  std::string predictions;  // default "predictions.csv"
  std::string study_dir;    // default "."
};

struct StudySpec {
  std::vector<int> dim_grid;  // projection dimensions for the decomposition
  std::vector<int> n_grid;    // sample sizes
  int lag_window = 10;        // |h| range for the lemma checks
  ScheduleSpec m_of_n;        // m_n mapping for the rate bound
};

struct ExperimentConfig {
  LinearProcessModel model;

  BasisKind basis_kind = BasisKind::covariance_eigenbasis;
  int basis_dim = 0;    // projection dimension for fixed/fma
  int resolution = 256; // grid resolution when curves are materialized
  std::optional<std::string> basis_file;  // user-supplied basis

  AlgorithmKind algorithm = AlgorithmKind::fixed;
  ScheduleSpec schedule;          // increasing only
  std::optional<int> q_star;      // fma only; detected when absent

  int n_max = 50;
  int mc_runs = 2000;
  std::uint64_t seed = 1;
  double pivot_tol = 1e-10;
  int omega_grid = 512;
  bool emit_grid_values = false;  // reconstruct curves in trajectory output
  OutputPaths output;
  StudySpec study;
};

/// Parses and fully validates a config file; throws config_error naming the
/// offending key.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Re-runs every invariant (model, schedule, referenced files).
void validate_config(const ExperimentConfig& config);

/// Stable hash of the model section, for the simulation metadata sidecar.
std::uint64_t model_hash(const LinearProcessModel& model);

}  // namespace flip
