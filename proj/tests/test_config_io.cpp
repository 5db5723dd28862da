#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "config.hpp"
#include "covariance.hpp"
#include "errors.hpp"
#include "io.hpp"

using namespace flip;

namespace {

const char* kFmaConfig = R"({
  "model": {
    "kind": "fma",
    "D": 2,
    "noise": {"eigenvalues": [1.0, 0.5]},
    "operators": {"gamma1": [[0.4, 0.1], [-0.2, 0.3]]}
  },
  "basis": {"kind": "covariance-eigenbasis", "D": 2, "resolution": 128},
  "algorithm": {"kind": "fixed"},
  "run": {"n_max": 12, "mc_runs": 50, "seed": 9, "omega_grid": 64}
})";

std::filesystem::path tmp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "flip_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("a full config file parses into the expected fields") {
  const ExperimentConfig cfg = parse_config(kFmaConfig);
  CHECK(cfg.model.kind == ModelKind::fma);
  CHECK(cfg.model.dim == 2);
  CHECK(cfg.model.order() == 1);
  CHECK(cfg.model.coeffs[0](1, 0) == doctest::Approx(-0.2));
  CHECK(cfg.basis_kind == BasisKind::covariance_eigenbasis);
  CHECK(cfg.n_max == 12);
  CHECK(cfg.mc_runs == 50);
  CHECK(cfg.seed == 9);
  CHECK(cfg.omega_grid == 64);
}

TEST_CASE("white-noise shorthand builds an order-zero model") {
  const ExperimentConfig cfg = parse_config(R"({
    "model": {"kind": "white-noise", "D": 3,
              "noise": {"eigenvalues": [2.0, 1.0, 0.5]}}
  })");
  CHECK(cfg.model.kind == ModelKind::fma);
  CHECK(cfg.model.order() == 0);
  CHECK(cfg.basis_dim == 3);
}

TEST_CASE("config errors name the offending key") {
  try {
    (void)parse_config(R"({"model": {"kind": "fma", "D": 2}})");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("model.noise") != std::string::npos);
  }

  try {
    (void)parse_config(R"({
      "model": {"kind": "far1", "D": 1,
                "noise": {"eigenvalues": [1.0]},
                "operators": {"phi": [[1.1]]}}
    })");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()) == "stationarity: operator norm >= 1");
  }
}

TEST_CASE("schedule whitelist evaluates and validates") {
  ScheduleSpec constant;
  constant.kind = ScheduleSpec::Kind::constant;
  constant.value = 3;
  CHECK(constant.realize(5) == std::vector<int>({3, 3, 3, 3, 3}));

  ScheduleSpec log2s;
  log2s.kind = ScheduleSpec::Kind::floor_log;
  log2s.cap = 4;
  CHECK(log2s.at(1) == 1);
  CHECK(log2s.at(2) == 2);
  CHECK(log2s.at(8) == 4);
  CHECK(log2s.at(1000) == 4);

  ScheduleSpec roots;
  roots.kind = ScheduleSpec::Kind::floor_sqrt;
  roots.cap = 100;
  CHECK(roots.at(1) == 1);
  CHECK(roots.at(9) == 3);
  CHECK(roots.at(10) == 3);

  ScheduleSpec explicit_list;
  explicit_list.kind = ScheduleSpec::Kind::explicit_list;
  explicit_list.values = {1, 1, 2, 1};
  CHECK_THROWS_AS((void)explicit_list.realize(4), config_error);
  explicit_list.values = {1, 1, 2};
  CHECK_THROWS_AS((void)explicit_list.realize(4), config_error);
  explicit_list.values = {1, 1, 2, 2};
  CHECK(explicit_list.realize(4) == std::vector<int>({1, 1, 2, 2}));
}

TEST_CASE("increasing algorithm configs check the schedule against the model") {
  const std::string text = R"({
    "model": {"kind": "fma", "D": 2,
              "noise": {"eigenvalues": [1.0, 0.5]},
              "operators": {"gamma1": [[0.3, 0.0], [0.0, 0.2]]}},
    "algorithm": {"kind": "increasing",
                  "schedule": {"type": "explicit", "values": [1, 1, 2, 2, 2, 2]}},
    "run": {"n_max": 5}
  })";
  CHECK_NOTHROW((void)parse_config(text));
  const std::string bad = R"({
    "model": {"kind": "fma", "D": 2,
              "noise": {"eigenvalues": [1.0, 0.5]},
              "operators": {"gamma1": [[0.3, 0.0], [0.0, 0.2]]}},
    "algorithm": {"kind": "increasing",
                  "schedule": {"type": "constant", "value": 5}},
    "run": {"n_max": 5}
  })";
  CHECK_THROWS_AS((void)parse_config(bad), config_error);
}

TEST_CASE("matrix csv round trip is exact") {
  Matrix m(3, 2);
  m << 1.0, -0.125, 3.141592653589793, 1e-17, -2.5e8, 0.1;
  const auto path = tmp_path("matrix.csv");
  write_matrix_csv(path.string(), m);
  const Matrix back = read_matrix_csv(path.string());
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grid function round trip is exact") {
  const Grid grid(64);
  Vector v(64);
  for (int k = 0; k < 64; ++k) v(k) = std::sin(0.1 * k) / 3.0;
  const GridFunction f(grid, v);
  const auto path = tmp_path("function.csv");
  write_grid_function(path.string(), f);
  const GridFunction back = read_grid_function(path.string(), grid);
  CHECK((f.values - back.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis file round trip preserves kind and functions") {
  const OrthonormalBasis basis = fourier_basis(Grid(64), 5);
  const auto path = tmp_path("basis.txt");
  write_basis_file(path.string(), basis);
  const OrthonormalBasis back = read_basis_file(path.string());
  CHECK(back.kind == BasisKind::fourier);
  CHECK(back.dimension() == 5);
  CHECK(back.grid.resolution == 64);
  // Re-orthonormalization of an already orthonormal family is a no-op up to
  // rounding.
  CHECK(max_abs(back.values - basis.values) <= 1e-12);
}

TEST_CASE("lagcov file round trip is exact") {
  LinearProcessModel m;
  m.kind = ModelKind::fma;
  m.dim = 2;
  Matrix gamma(2, 2);
  gamma << 0.4, 0.1, -0.2, 0.3;
  m.coeffs = {gamma};
  m.noise.eigenvalues = Vector(2);
  m.noise.eigenvalues << 1.0, 0.5;
  const LagCovSet covs = analytic_lag_cov_set(m, 3);
  const auto path = tmp_path("lagcov.txt");
  write_lagcov_file(path.string(), covs);
  const LagCovSet back = read_lagcov_file(path.string());
  CHECK(back.dim == 2);
  CHECK(back.max_lag() == 3);
  for (int h = 0; h <= 3; ++h)
    CHECK(max_abs(back.at(h) - covs.at(h)) == 0.0);
}

TEST_CASE("state dump carries the header and all blocks") {
  LinearProcessModel m;
  m.kind = ModelKind::fma;
  m.dim = 1;
  m.coeffs = {Matrix::Constant(1, 1, 0.5)};
  m.noise.eigenvalues = Vector::Constant(1, 1.0);
  const LagCovSet covs = analytic_lag_cov_set(m, 4);
  const InnovationsStateFixedD state = innovations_fixed(covs, 4, 1e-10);
  const auto path = tmp_path("state.txt");
  dump_state(path.string(), state);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# innovations state kind=fixed D=1 n_max=4 sparse_order=-1");
  int theta_lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("theta ", 0) == 0) ++theta_lines;
  CHECK(theta_lines == 1 + 2 + 3 + 4);
}

TEST_CASE("model hash separates models and is stable") {
  const ExperimentConfig a = parse_config(kFmaConfig);
  const std::uint64_t h1 = model_hash(a.model);
  const std::uint64_t h2 = model_hash(a.model);
  CHECK(h1 == h2);
  ExperimentConfig b = a;
  b.model.coeffs[0](0, 0) += 1e-9;
  CHECK(model_hash(b.model) != h1);
}

TEST_CASE("report writer emits csv and aligned tables") {
  const std::vector<std::vector<std::string>> rows = {
      {"a", "bb"}, {"ccc", "d"}};
  const auto csv = tmp_path("report.csv");
  write_report(csv.string(), OutputFormat::csv, rows);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,bb");
  const auto table = tmp_path("report.txt");
  write_report(table.string(), OutputFormat::table, rows);
  std::ifstream tin(table);
  std::getline(tin, line);
  CHECK(line.rfind("a  ", 0) == 0);
}
