#include "process.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace flip {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::fma: return "fma";
    case ModelKind::far1: return "far1";
    case ModelKind::general_ma: return "general_ma";
  }
  return "?";
}

void validate(const LinearProcessModel& model) {
  if (model.dim < 1) throw config_error("model.D: must be positive");
  if (model.noise.dim() != model.dim)
    throw config_error("model.noise.eigenvalues: expected " +
                       std::to_string(model.dim) + " entries, got " +
                       std::to_string(model.noise.dim()));
  for (int i = 0; i < model.noise.dim(); ++i) {
    if (!(model.noise.eigenvalues(i) > 0.0))
      throw config_error("model.noise.eigenvalues: entry " +
                         std::to_string(i + 1) + " not strictly positive");
    if (i > 0 && model.noise.eigenvalues(i) > model.noise.eigenvalues(i - 1))
      throw config_error("model.noise.eigenvalues: not nonincreasing at entry " +
                         std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < model.coeffs.size(); ++j) {
    const Matrix& c = model.coeffs[j];
    if (c.rows() != model.dim || c.cols() != model.dim)
      throw config_error("model.operators: operator " + std::to_string(j + 1) +
                         " is not " + std::to_string(model.dim) + "x" +
                         std::to_string(model.dim));
    if (!c.allFinite())
      throw config_error("model.operators: operator " + std::to_string(j + 1) +
                         " has non-finite entries");
  }
  switch (model.kind) {
    case ModelKind::far1:
      if (model.coeffs.size() != 1)
        throw config_error("model.operators: far1 takes exactly one operator");
      if (operator_norm(model.coeffs[0]) >= 1.0)
        throw config_error("stationarity: operator norm >= 1");
      break;
    case ModelKind::fma:
      break;
    case ModelKind::general_ma:
      if (model.psi_tail_bound < 0.0)
        throw config_error("model.psi_tail_bound: must be nonnegative");
      if (model.declared_psi_norms) {
        const auto& declared = *model.declared_psi_norms;
        if (declared.size() != model.coeffs.size())
          throw config_error("model.psi_norms: expected one entry per operator");
        for (std::size_t j = 0; j < declared.size(); ++j)
          if (std::abs(declared[j] - operator_norm(model.coeffs[j])) > 1e-8)
            throw config_error("model.psi_norms: entry " +
                               std::to_string(j + 1) +
                               " disagrees with the operator norm");
      }
      break;
  }
}

bool has_finite_ma_order(const LinearProcessModel& model) {
  return model.kind != ModelKind::far1;
}

Matrix simulate_noise(const NoiseSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw config_error("simulate_noise: n must be positive");
  const int dim = spec.dim();
  Matrix out(n, dim);
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Vector scale = spec.eigenvalues.cwiseSqrt();
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < dim; ++i) out(t, i) = scale(i) * gauss(engine);
  return out;
}

namespace {

int far1_burn_in(const Matrix& phi) {
  const double nrm = operator_norm(phi);
  if (nrm < 1e-12) return 1;
  return static_cast<int>(
      std::ceil(std::log(1e-8) / std::log(nrm)));
}

}  // namespace

SimulationResult simulate(const LinearProcessModel& model, int n,
                          std::uint64_t seed) {
  validate(model);
  if (n < 1) throw config_error("simulate: n must be positive");
  const int dim = model.dim;
  SimulationResult out;
  out.path.resize(n, dim);
  out.noise.resize(n, dim);

  if (model.kind == ModelKind::far1) {
    const Matrix& phi = model.coeffs[0];
    const int burn = far1_burn_in(phi);
    const Matrix eps = simulate_noise(model.noise, burn + n, seed);
    Vector x = Vector::Zero(dim);
    for (int t = 0; t < burn + n; ++t) {
      x = phi * x + eps.row(t).transpose();
      if (t >= burn) {
        out.path.row(t - burn) = x.transpose();
        out.noise.row(t - burn) = eps.row(t);
      }
    }
    return out;
  }

  // Moving-average kinds: q presample draws so X_1 already sees a full window.
  const int q = model.order();
  const Matrix eps = simulate_noise(model.noise, n + q, seed);
  for (int t = 0; t < n; ++t) {
    Vector x = eps.row(q + t).transpose();
    for (int j = 1; j <= q; ++j)
      x += model.coeffs[j - 1] * eps.row(q + t - j).transpose();
    out.path.row(t) = x.transpose();
    out.noise.row(t) = eps.row(q + t);
  }
  return out;
}

double InverseRepresentation::norm_sum() const {
  double s = 0.0;
  for (const Matrix& p : pi) s += operator_norm(p);
  return s;
}

InverseRepresentation inverse_representation(const LinearProcessModel& model,
                                             int truncation) {
  validate(model);
  if (truncation < 1)
    throw config_error("inverse_representation: truncation must be positive");
  InverseRepresentation out;
  switch (model.kind) {
    case ModelKind::far1:
      // An autoregression is its own inverse representation.
      out.pi.push_back(model.coeffs[0]);
      for (int j = 2; j <= truncation; ++j)
        out.pi.push_back(Matrix::Zero(model.dim, model.dim));
      out.tail_bound = 0.0;
      return out;
    case ModelKind::fma: {
      if (model.order() == 0) {
        // White noise: all pi vanish.
        for (int j = 1; j <= truncation; ++j)
          out.pi.push_back(Matrix::Zero(model.dim, model.dim));
        out.tail_bound = 0.0;
        return out;
      }
      if (model.order() != 1)
        throw config_error(
            "inverse_representation: invertibility not certified for fma of "
            "order " + std::to_string(model.order()));
      const Matrix& gamma = model.coeffs[0];
      const double nrm = operator_norm(gamma);
      if (nrm >= 1.0)
        throw config_error(
            "inverse_representation: invertibility not certified, "
            "||gamma|| >= 1");
      Matrix power = gamma;
      double sign = 1.0;
      for (int j = 1; j <= truncation; ++j) {
        out.pi.push_back(sign * power);
        power = gamma * power;
        sign = -sign;
      }
      out.tail_bound =
          nrm < 1e-300 ? 0.0 : std::pow(nrm, truncation + 1) / (1.0 - nrm);
      return out;
    }
    case ModelKind::general_ma:
      throw config_error(
          "inverse_representation: invertibility not certified for general_ma");
  }
  throw config_error("inverse_representation: unknown model kind");
}

std::vector<Matrix> ma_coefficients(const LinearProcessModel& model,
                                    int count) {
  std::vector<Matrix> psi;
  psi.reserve(count);
  if (model.kind == ModelKind::far1) {
    Matrix power = model.coeffs[0];
    for (int j = 1; j <= count; ++j) {
      psi.push_back(power);
      power = model.coeffs[0] * power;
    }
    return psi;
  }
  for (int j = 1; j <= count; ++j)
    psi.push_back(j <= model.order() ? model.coeffs[j - 1]
                                     : Matrix::Zero(model.dim, model.dim));
  return psi;
}

}  // namespace flip
