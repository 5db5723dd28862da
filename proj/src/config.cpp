#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "io.hpp"
#include "rng.hpp"

namespace flip {

using nlohmann::json;

int ScheduleSpec::at(int n) const {
  if (n < 1) throw config_error("schedule: n must be positive");
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::floor_log: {
      const int d = static_cast<int>(std::floor(std::log2(n))) + 1;
      return std::min(std::max(d, 1), cap);
    }
    case Kind::floor_sqrt: {
      const int d = static_cast<int>(std::floor(std::sqrt(n)));
      return std::min(std::max(d, 1), cap);
    }
    case Kind::explicit_list:
      if (n > static_cast<int>(values.size()))
        throw config_error("algorithm.schedule.values: needs at least " +
                           std::to_string(n) + " entries");
      return values[n - 1];
  }
  throw config_error("schedule: unknown kind");
}

std::vector<int> ScheduleSpec::realize(int count) const {
  std::vector<int> out(count);
  for (int n = 1; n <= count; ++n) {
    out[n - 1] = at(n);
    if (out[n - 1] < 1)
      throw config_error("algorithm.schedule: d_" + std::to_string(n) +
                         " is not positive");
    if (n > 1 && out[n - 1] < out[n - 2])
      throw config_error("algorithm.schedule: not nondecreasing at n=" +
                         std::to_string(n));
  }
  return out;
}

const char* to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::fixed: return "fixed";
    case AlgorithmKind::fma: return "fma";
    case AlgorithmKind::increasing: return "increasing";
  }
  return "?";
}

namespace {

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw config_error(key + ": " + what);
}

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) key_error(path + key, "missing");
  return *it;
}

int get_int(const json& j, const std::string& key, const std::string& path,
            std::optional<int> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    key_error(path + key, "missing");
  }
  if (!it->is_number_integer()) key_error(path + key, "expected an integer");
  return it->get<int>();
}

double get_double(const json& j, const std::string& key,
                  const std::string& path, std::optional<double> fallback) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    key_error(path + key, "missing");
  }
  if (!it->is_number()) key_error(path + key, "expected a number");
  return it->get<double>();
}

Matrix parse_operator(const json& j, const std::string& key, int dim) {
  if (!j.is_array()) key_error(key, "expected a row-major matrix");
  Matrix m(dim, dim);
  if (static_cast<int>(j.size()) != dim)
    key_error(key, "expected " + std::to_string(dim) + " rows");
  for (int r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      key_error(key, "row " + std::to_string(r + 1) + " is not length " +
                         std::to_string(dim));
    for (int c = 0; c < dim; ++c) {
      if (!row[c].is_number())
        key_error(key, "entry (" + std::to_string(r + 1) + "," +
                           std::to_string(c + 1) + ") is not a number");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

LinearProcessModel parse_model(const json& j) {
  LinearProcessModel model;
  const std::string kind =
      require(j, "kind", "model.").get<std::string>();
  model.dim = get_int(j, "D", "model.");
  const json& noise = require(j, "noise", "model.");
  const json& eig = require(noise, "eigenvalues", "model.noise.");
  if (!eig.is_array() || eig.empty())
    key_error("model.noise.eigenvalues", "expected a nonempty array");
  model.noise.eigenvalues.resize(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (!eig[i].is_number())
      key_error("model.noise.eigenvalues", "entry " + std::to_string(i + 1) +
                                               " is not a number");
    model.noise.eigenvalues(i) = eig[i].get<double>();
  }

  auto collect = [&](const std::string& prefix, int count) {
    const json& ops = require(j, "operators", "model.");
    for (int i = 1; i <= count; ++i) {
      const std::string name = prefix + std::to_string(i);
      model.coeffs.push_back(parse_operator(
          require(ops, name, "model.operators."), "model.operators." + name,
          model.dim));
    }
  };

  if (kind == "white-noise" || kind == "white_noise") {
    model.kind = ModelKind::fma;  // FMA(0)
  } else if (kind == "fma") {
    model.kind = ModelKind::fma;
    int q = get_int(j, "q", "model.", 0);
    if (q == 0 && j.contains("operators")) {
      // Count gamma<i> keys when q is not spelled out.
      while (j["operators"].contains("gamma" + std::to_string(q + 1))) ++q;
    }
    collect("gamma", q);
  } else if (kind == "far1") {
    model.kind = ModelKind::far1;
    const json& ops = require(j, "operators", "model.");
    model.coeffs.push_back(parse_operator(require(ops, "phi", "model.operators."),
                                          "model.operators.phi", model.dim));
  } else if (kind == "general_ma" || kind == "general-ma") {
    model.kind = ModelKind::general_ma;
    const int truncation = get_int(j, "truncation", "model.");
    collect("psi", truncation);
    model.psi_tail_bound = get_double(j, "psi_tail_bound", "model.", 0.0);
    if (j.contains("psi_norms")) {
      std::vector<double> norms;
      for (const auto& v : j["psi_norms"]) norms.push_back(v.get<double>());
      model.declared_psi_norms = std::move(norms);
    }
  } else {
    key_error("model.kind", "unknown kind '" + kind + "'");
  }
  validate(model);
  return model;
}

ScheduleSpec parse_schedule(const json& j, const std::string& path,
                            int default_cap) {
  ScheduleSpec spec;
  const std::string type = require(j, "type", path).get<std::string>();
  if (type == "constant") {
    spec.kind = ScheduleSpec::Kind::constant;
    spec.value = get_int(j, "value", path);
  } else if (type == "floor-log") {
    spec.kind = ScheduleSpec::Kind::floor_log;
    spec.cap = get_int(j, "cap", path, default_cap);
  } else if (type == "floor-sqrt") {
    spec.kind = ScheduleSpec::Kind::floor_sqrt;
    spec.cap = get_int(j, "cap", path, default_cap);
  } else if (type == "explicit") {
    spec.kind = ScheduleSpec::Kind::explicit_list;
    const json& values = require(j, "values", path);
    if (!values.is_array() || values.empty())
      key_error(path + "values", "expected a nonempty array");
    for (const auto& v : values) spec.values.push_back(v.get<int>());
  } else {
    key_error(path + "type",
              "expected constant | floor-log | floor-sqrt | explicit");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.model = parse_model(require(j, "model", ""));

  if (j.contains("basis")) {
    const json& b = j["basis"];
    if (b.contains("kind"))
      cfg.basis_kind = basis_kind_from_string(b["kind"].get<std::string>());
    cfg.basis_dim = get_int(b, "D", "basis.", cfg.model.dim);
    cfg.resolution = get_int(b, "resolution", "basis.", 256);
    if (b.contains("file")) cfg.basis_file = b["file"].get<std::string>();
  } else {
    cfg.basis_dim = cfg.model.dim;
  }

  if (j.contains("algorithm")) {
    const json& a = j["algorithm"];
    const std::string kind =
        require(a, "kind", "algorithm.").get<std::string>();
    if (kind == "fixed") cfg.algorithm = AlgorithmKind::fixed;
    else if (kind == "fma") cfg.algorithm = AlgorithmKind::fma;
    else if (kind == "increasing") cfg.algorithm = AlgorithmKind::increasing;
    else key_error("algorithm.kind", "expected fixed | fma | increasing");
    if (a.contains("q_star")) cfg.q_star = a["q_star"].get<int>();
    if (cfg.algorithm == AlgorithmKind::increasing)
      cfg.schedule = parse_schedule(require(a, "schedule", "algorithm."),
                                    "algorithm.schedule.", cfg.model.dim);
  }

  if (j.contains("run")) {
    const json& r = j["run"];
    cfg.n_max = get_int(r, "n_max", "run.", cfg.n_max);
    cfg.mc_runs = get_int(r, "mc_runs", "run.", cfg.mc_runs);
    if (r.contains("seed")) cfg.seed = r["seed"].get<std::uint64_t>();
    cfg.pivot_tol = get_double(r, "pivot_tol", "run.", cfg.pivot_tol);
    cfg.omega_grid = get_int(r, "omega_grid", "run.", cfg.omega_grid);
    if (r.contains("emit")) {
      const std::string emit = r["emit"].get<std::string>();
      if (emit == "grid") cfg.emit_grid_values = true;
      else if (emit != "coordinates")
        key_error("run.emit", "expected coordinates | grid");
    }
    if (r.contains("output")) {
      const json& o = r["output"];
      if (o.contains("trajectory"))
        cfg.output.trajectory = o["trajectory"].get<std::string>();
      if (o.contains("predictions"))
        cfg.output.predictions = o["predictions"].get<std::string>();
      if (o.contains("study_dir"))
        cfg.output.study_dir = o["study_dir"].get<std::string>();
    }
  }

  // Study grids default to a sweep over all projection dimensions and a
  // short/medium/long n ladder.
  for (int d = 1; d <= cfg.model.dim; ++d) cfg.study.dim_grid.push_back(d);
  cfg.study.n_grid = {10, 50, 200};
  cfg.study.m_of_n.kind = ScheduleSpec::Kind::floor_sqrt;
  cfg.study.m_of_n.cap = 1 << 20;
  if (j.contains("study")) {
    const json& s = j["study"];
    if (s.contains("D_grid")) {
      cfg.study.dim_grid.clear();
      for (const auto& v : s["D_grid"]) cfg.study.dim_grid.push_back(v.get<int>());
    }
    if (s.contains("n_grid")) {
      cfg.study.n_grid.clear();
      for (const auto& v : s["n_grid"]) cfg.study.n_grid.push_back(v.get<int>());
    }
    cfg.study.lag_window = get_int(s, "lag_window", "study.", 10);
    if (s.contains("m_of_n"))
      cfg.study.m_of_n = parse_schedule(s["m_of_n"], "study.m_of_n.", 1 << 20);
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  validate(cfg.model);
  if (cfg.basis_dim < 1 || cfg.basis_dim > cfg.model.dim)
    throw config_error("basis.D: must lie in [1, model.D]");
  if (cfg.resolution < 2)
    throw config_error("basis.resolution: must be at least 2");
  if (cfg.basis_dim > cfg.resolution)
    throw config_error("basis.D: exceeds basis.resolution");
  if (cfg.basis_file && !std::filesystem::exists(*cfg.basis_file))
    throw config_error("basis.file: '" + *cfg.basis_file + "' does not exist");
  if (cfg.n_max < 1) throw config_error("run.n_max: must be positive");
  if (cfg.mc_runs < 0) throw config_error("run.mc_runs: must be nonnegative");
  if (!(cfg.pivot_tol > 0.0))
    throw config_error("run.pivot_tol: must be positive");
  if (cfg.omega_grid < 2)
    throw config_error("run.omega_grid: must be at least 2");
  if (cfg.algorithm == AlgorithmKind::increasing) {
    const auto dims = cfg.schedule.realize(cfg.n_max + 1);
    for (int d : dims)
      if (d > cfg.model.dim)
        throw config_error("algorithm.schedule: dimension exceeds model.D");
  }
  if (cfg.q_star && (*cfg.q_star < 0 || *cfg.q_star > cfg.model.order()))
    throw config_error("algorithm.q_star: outside [0, model order]");
  for (int d : cfg.study.dim_grid)
    if (d < 1 || d > cfg.model.dim)
      throw config_error("study.D_grid: dimension outside [1, model.D]");
  for (int n : cfg.study.n_grid)
    if (n < 1) throw config_error("study.n_grid: entries must be positive");
  if (cfg.study.lag_window < 0)
    throw config_error("study.lag_window: must be nonnegative");
}

std::uint64_t model_hash(const LinearProcessModel& model) {
  // FNV-1a over a canonical text rendering of the model section.
  std::string repr = std::string(to_string(model.kind)) + "|" +
                     std::to_string(model.dim) + "|";
  for (int i = 0; i < model.noise.dim(); ++i)
    repr += format_full(model.noise.eigenvalues(i)) + ",";
  repr += "|";
  for (const Matrix& c : model.coeffs) {
    for (Eigen::Index r = 0; r < c.rows(); ++r)
      for (Eigen::Index k = 0; k < c.cols(); ++k)
        repr += format_full(c(r, k)) + ",";
    repr += ";";
  }
  repr += format_full(model.psi_tail_bound);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : repr) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace flip
