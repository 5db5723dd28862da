// flip CLI: simulate functional linear processes, compute innovations
// predictors, and run convergence studies. All heavy lifting lives behind
// the C API of libflip; this file only parses arguments and maps status
// codes to exit codes (0 ok, 1 usage, 2 config, 3 numerical).

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flip/flip.h"

namespace {

struct Options {
  std::string config_path;
  std::string seed;
  std::string format = "csv";
  std::string out;
  std::string outdir;
  std::string trajectory;
  std::string dump_state;
};

int fail(flip_status status) {
  std::cerr << "error: " << flip_last_error() << "\n";
  return static_cast<int>(status);
}

flip_config* open_config(const Options& opt, flip_status* status) {
  flip_config* config = nullptr;
  if (!opt.seed.empty()) {
    try {
      (void)std::stoull(opt.seed);
    } catch (const std::exception&) {
      std::cerr << "error: --seed expects an unsigned integer\n";
      *status = FLIP_ERR_USAGE;
      return nullptr;
    }
  }
  *status = flip_config_open(opt.config_path.c_str(), &config);
  if (*status != FLIP_OK) return nullptr;
  if (!opt.seed.empty())
    flip_config_set_seed(config, std::stoull(opt.seed));
  return config;
}

}  // namespace

int run(int argc, char** argv);

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Best linear one-step prediction for functional linear "
               "processes via the Innovations Algorithm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(flip_version()));

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "Experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", opt.seed, "Override the config seed");
    cmd->add_option("--format", opt.format, "Report format: csv|table");
    cmd->add_option("--dump-state", opt.dump_state,
                    "Write the theta/V arrays to this path (predict)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Write a trajectory CSV");
  add_common(simulate);
  simulate->add_option("--out", opt.out, "Trajectory output path");

  CLI::App* predict =
      app.add_subcommand("predict", "One-step predictions for a trajectory");
  add_common(predict);
  predict->add_option("--trajectory", opt.trajectory, "Input trajectory CSV")
      ->required();
  predict->add_option("--out", opt.out, "Predictions output path");

  CLI::App* study =
      app.add_subcommand("study", "Error decomposition and rate-bound tables");
  add_common(study);
  study->add_option("--outdir", opt.outdir, "Directory for the report files");

  CLI::App* validate = app.add_subcommand("validate", "Lint a config file");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  flip_status status = FLIP_OK;
  flip_config* config = open_config(opt, &status);
  if (!config)
    return status == FLIP_ERR_USAGE ? static_cast<int>(status) : fail(status);

  if (simulate->parsed()) {
    status = flip_cmd_simulate(config, opt.out.empty() ? nullptr : opt.out.c_str());
  } else if (predict->parsed()) {
    status = flip_cmd_predict(config, opt.trajectory.c_str(),
                              opt.out.empty() ? nullptr : opt.out.c_str(),
                              opt.dump_state.empty() ? nullptr
                                                     : opt.dump_state.c_str());
  } else if (study->parsed()) {
    status = flip_cmd_study(config,
                            opt.outdir.empty() ? nullptr : opt.outdir.c_str(),
                            opt.format.c_str());
  } else if (validate->parsed()) {
    status = flip_cmd_validate(config);
    if (status == FLIP_OK) std::cout << "ok\n";
  }

  flip_config_close(config);
  return status == FLIP_OK ? 0 : fail(status);
}
