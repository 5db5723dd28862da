#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "flip/flip.h"

namespace {

const char* kConfig = R"({
  "model": {
    "kind": "fma",
    "D": 1,
    "noise": {"eigenvalues": [1.0]},
    "operators": {"gamma1": [[0.5]]}
  },
  "basis": {"kind": "covariance-eigenbasis", "D": 1},
  "algorithm": {"kind": "fixed"},
  "run": {"n_max": 10, "mc_runs": 20, "seed": 4, "omega_grid": 64}
})";

std::string tmp(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "flip_capi_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parse, validate, and close") {
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(kConfig, &config) == FLIP_OK);
  CHECK(flip_config_validate(config) == FLIP_OK);
  flip_config_close(config);
}

TEST_CASE("invalid configs surface FLIP_ERR_CONFIG with a message") {
  flip_config* config = nullptr;
  CHECK(flip_config_parse(R"({"model": {"kind": "nope"}})", &config) ==
        FLIP_ERR_CONFIG);
  CHECK(std::string(flip_last_error()).find("model.") != std::string::npos);
}

TEST_CASE("simulate is byte-identical across reruns and leaves a sidecar") {
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(kConfig, &config) == FLIP_OK);
  const std::string a = tmp("traj_a.csv");
  const std::string b = tmp("traj_b.csv");
  REQUIRE(flip_cmd_simulate(config, a.c_str()) == FLIP_OK);
  REQUIRE(flip_cmd_simulate(config, b.c_str()) == FLIP_OK);
  CHECK(slurp(a) == slurp(b));
  CHECK(std::filesystem::exists(a + ".meta.json"));
  flip_config_set_seed(config, 99);
  const std::string c = tmp("traj_c.csv");
  REQUIRE(flip_cmd_simulate(config, c.c_str()) == FLIP_OK);
  CHECK(slurp(a) != slurp(c));
  flip_config_close(config);
}

TEST_CASE("predict consumes a simulated trajectory unchanged") {
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(kConfig, &config) == FLIP_OK);
  const std::string traj = tmp("roundtrip.csv");
  REQUIRE(flip_cmd_simulate(config, traj.c_str()) == FLIP_OK);
  const std::string pred = tmp("pred.csv");
  const std::string state = tmp("state.txt");
  REQUIRE(flip_cmd_predict(config, traj.c_str(), pred.c_str(),
                           state.c_str()) == FLIP_OK);
  CHECK(std::filesystem::exists(pred));
  CHECK(std::filesystem::exists(state));
  std::ifstream in(pred);
  std::string headerline;
  std::getline(in, headerline);
  CHECK(headerline == "n,xhat_1,innovation_norm");
  flip_config_close(config);
}

TEST_CASE("study writes the three report files") {
  flip_config* config = nullptr;
  const std::string cfg = R"({
    "model": {"kind": "fma", "D": 2,
              "noise": {"eigenvalues": [1.0, 0.5]},
              "operators": {"gamma1": [[0.4, 0.1], [-0.2, 0.3]]}},
    "basis": {"kind": "covariance-eigenbasis", "D": 2},
    "run": {"n_max": 10, "mc_runs": 40, "seed": 5, "omega_grid": 64},
    "study": {"D_grid": [1, 2], "n_grid": [4, 8], "lag_window": 4}
  })";
  REQUIRE(flip_config_parse(cfg.c_str(), &config) == FLIP_OK);
  const std::string dir = tmp("study_out");
  REQUIRE(flip_cmd_study(config, dir.c_str(), "csv") == FLIP_OK);
  CHECK(std::filesystem::exists(dir + "/decomposition.csv"));
  CHECK(std::filesystem::exists(dir + "/rate_bounds.csv"));
  CHECK(std::filesystem::exists(dir + "/lemmas.csv"));
  CHECK(std::filesystem::exists(dir + "/spectral.csv"));
  flip_config_close(config);
}

TEST_CASE("lemma failures are study data, not command failures") {
  // gamma = 1 sits on the invertibility boundary: the spectral positivity
  // check fails but the command still exits 0.
  const char* cfg = R"({
    "model": {"kind": "fma", "D": 1,
              "noise": {"eigenvalues": [1.0]},
              "operators": {"gamma1": [[1.0]]}},
    "basis": {"kind": "covariance-eigenbasis", "D": 1},
    "run": {"n_max": 8, "mc_runs": 20, "seed": 8, "omega_grid": 64},
    "study": {"D_grid": [1], "n_grid": [4], "lag_window": 3}
  })";
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(cfg, &config) == FLIP_OK);
  const std::string dir = tmp("study_boundary");
  REQUIRE(flip_cmd_study(config, dir.c_str(), "csv") == FLIP_OK);
  const std::string lemmas = slurp(dir + "/lemmas.csv");
  CHECK(lemmas.find("spectral-positivity,fail") != std::string::npos);
  flip_config_close(config);
}

TEST_CASE("fixed and constant-schedule increasing predictions agree bytewise") {
  const char* base = R"({
    "model": {"kind": "fma", "D": 2,
              "noise": {"eigenvalues": [1.0, 0.5]},
              "operators": {"gamma1": [[0.4, 0.1], [-0.2, 0.3]]}},
    "basis": {"kind": "covariance-eigenbasis", "D": 2},
    "algorithm": %ALGO%,
    "run": {"n_max": 15, "seed": 21}
  })";
  auto with_algo = [&](const std::string& algo) {
    std::string cfg(base);
    cfg.replace(cfg.find("%ALGO%"), 6, algo);
    return cfg;
  };
  flip_config* fixed = nullptr;
  flip_config* increasing = nullptr;
  REQUIRE(flip_config_parse(with_algo(R"({"kind": "fixed"})").c_str(),
                            &fixed) == FLIP_OK);
  REQUIRE(flip_config_parse(
              with_algo(R"({"kind": "increasing",
                            "schedule": {"type": "constant", "value": 2}})")
                  .c_str(),
              &increasing) == FLIP_OK);
  const std::string traj = tmp("algo_traj.csv");
  REQUIRE(flip_cmd_simulate(fixed, traj.c_str()) == FLIP_OK);
  const std::string pf = tmp("pred_fixed.csv");
  const std::string pi = tmp("pred_incr.csv");
  REQUIRE(flip_cmd_predict(fixed, traj.c_str(), pf.c_str(), nullptr) ==
          FLIP_OK);
  REQUIRE(flip_cmd_predict(increasing, traj.c_str(), pi.c_str(), nullptr) ==
          FLIP_OK);
  CHECK(slurp(pf) == slurp(pi));
  flip_config_close(fixed);
  flip_config_close(increasing);
}

TEST_CASE("grid emission writes one column per sample point") {
  const char* cfg = R"({
    "model": {"kind": "white-noise", "D": 3,
              "noise": {"eigenvalues": [1.0, 0.5, 0.25]}},
    "basis": {"kind": "fourier", "D": 3, "resolution": 64},
    "run": {"n_max": 4, "seed": 2, "emit": "grid"}
  })";
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(cfg, &config) == FLIP_OK);
  const std::string traj = tmp("grid.csv");
  REQUIRE(flip_cmd_simulate(config, traj.c_str()) == FLIP_OK);
  std::ifstream in(traj);
  std::string line;
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), ',') == 63);
  flip_config_close(config);
}

TEST_CASE("study renders aligned tables on request") {
  const char* cfg = R"({
    "model": {"kind": "fma", "D": 1,
              "noise": {"eigenvalues": [1.0]},
              "operators": {"gamma1": [[0.5]]}},
    "basis": {"kind": "covariance-eigenbasis", "D": 1},
    "run": {"n_max": 8, "mc_runs": 20, "seed": 6, "omega_grid": 64},
    "study": {"D_grid": [1], "n_grid": [4], "lag_window": 3}
  })";
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(cfg, &config) == FLIP_OK);
  const std::string dir = tmp("study_table");
  REQUIRE(flip_cmd_study(config, dir.c_str(), "table") == FLIP_OK);
  CHECK(std::filesystem::exists(dir + "/decomposition.txt"));
  CHECK(std::filesystem::exists(dir + "/lemmas.txt"));
  CHECK(flip_cmd_study(config, dir.c_str(), "bogus") == FLIP_ERR_CONFIG);
  flip_config_close(config);
}

TEST_CASE("array-level predictor reproduces the scalar ma(1) values") {
  // Lags 0..1 of the scalar MA(1) with gamma=0.5: c0=1.25, c1=0.5.
  const double covs[2] = {1.25, 0.5};
  flip_predictor* p = nullptr;
  REQUIRE(flip_predictor_create_from_covs(1, 1, covs, 4, 1e-10, &p) == FLIP_OK);
  CHECK(flip_predictor_dim(p) == 1);
  double v0 = 0.0;
  REQUIRE(flip_predictor_error_nuclear(p, 0, &v0) == FLIP_OK);
  CHECK(v0 == doctest::Approx(1.25));
  double v1 = 0.0;
  REQUIRE(flip_predictor_error_nuclear(p, 1, &v1) == FLIP_OK);
  CHECK(v1 == doctest::Approx(1.05));
  const double obs[1] = {1.0};
  double xhat = 0.0;
  REQUIRE(flip_predictor_predict(p, obs, 1, &xhat) == FLIP_OK);
  CHECK(xhat == doctest::Approx(0.4));
  REQUIRE(flip_predictor_predict(p, nullptr, 0, &xhat) == FLIP_OK);
  CHECK(xhat == 0.0);
  flip_predictor_close(p);
}

TEST_CASE("config-driven predictor matches the eigenbasis pipeline") {
  flip_config* config = nullptr;
  REQUIRE(flip_config_parse(kConfig, &config) == FLIP_OK);
  flip_predictor* p = nullptr;
  REQUIRE(flip_predictor_create(config, 8, &p) == FLIP_OK);
  CHECK(flip_predictor_dim(p) == 1);
  // Scalar model: the eigenbasis rotation is trivial and the hand values
  // carry over.
  const double obs[1] = {1.0};
  double xhat = 0.0;
  REQUIRE(flip_predictor_predict(p, obs, 1, &xhat) == FLIP_OK);
  CHECK(xhat == doctest::Approx(0.4).epsilon(1e-12));
  double v1 = 0.0;
  REQUIRE(flip_predictor_error_nuclear(p, 1, &v1) == FLIP_OK);
  CHECK(v1 == doctest::Approx(1.05).epsilon(1e-12));
  flip_predictor_close(p);
  flip_config_close(config);
}

TEST_CASE("numerical failures map to FLIP_ERR_NUMERIC") {
  // Perfectly correlated lags make V_1 singular.
  const double covs[2] = {1.0, 1.0};
  flip_predictor* p = nullptr;
  CHECK(flip_predictor_create_from_covs(1, 1, covs, 3, 1e-10, &p) ==
        FLIP_ERR_NUMERIC);
  CHECK(std::string(flip_last_error()).find("n=1") != std::string::npos);
}

TEST_CASE("usage errors map to FLIP_ERR_USAGE") {
  CHECK(flip_config_open(nullptr, nullptr) == FLIP_ERR_USAGE);
  flip_predictor* p = nullptr;
  CHECK(flip_predictor_create_from_covs(0, 0, nullptr, 1, 1e-10, &p) ==
        FLIP_ERR_USAGE);
}
