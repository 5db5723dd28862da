#pragma once

#include <string>

#include "config.hpp"
#include "io.hpp"

namespace flip {

// Batch entry points behind the CLI and the C API. Empty path arguments fall
// back to the config's run.output section, then to builtin defaults. All
// randomness flows from the config seed; reruns are byte-identical.

void run_simulate(const ExperimentConfig& config, const std::string& out_path);

void run_predict(const ExperimentConfig& config,
                 const std::string& trajectory_path,
                 const std::string& out_path,
                 const std::string& dump_state_path);

void run_study(const ExperimentConfig& config, const std::string& out_dir,
               OutputFormat format);

/// Config lint; parsing already validates, this re-checks a loaded config.
void run_validate(const ExperimentConfig& config);

}  // namespace flip
