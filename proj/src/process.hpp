#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "linalg.hpp"

namespace flip {

// Functional linear processes in basis coordinates: the D coordinates of a
// curve along a fixed orthonormal basis evolve as a D-variate linear process
// driven by Gaussian white noise with diagonal covariance along that basis.

/// Noise covariance along the basis: eigenvalues alpha_1 >= ... >= alpha_D > 0.
struct NoiseSpec {
  Vector eigenvalues;

  double sigma2() const { return eigenvalues.sum(); }
  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

enum class ModelKind { fma, far1, general_ma };

const char* to_string(ModelKind kind);

/// FMA(q): coeffs = gamma_1..gamma_q (q may be 0: white noise).
/// FAR(1): coeffs = {Phi}, operator norm < 1.
/// GeneralMA: coeffs = psi_1..psi_J, truncated MA(infinity); psi_0 = I always.
struct LinearProcessModel {
  ModelKind kind = ModelKind::fma;
  int dim = 0;
  std::vector<Matrix> coeffs;
  NoiseSpec noise;
  /// GeneralMA only: declared bound on sum_{j>J} ||psi_j||_L.
  double psi_tail_bound = 0.0;
  /// GeneralMA only: declared coefficient norms, checked against coeffs.
  std::optional<std::vector<double>> declared_psi_norms;

  int order() const { return static_cast<int>(coeffs.size()); }
};

/// Checks all model invariants; throws config_error with the offending field.
void validate(const LinearProcessModel& model);

/// True when every lag covariance beyond order() vanishes (FMA / GeneralMA).
bool has_finite_ma_order(const LinearProcessModel& model);

/// n draws of the coordinate noise vector, one per row; coordinate i has
/// variance eigenvalues[i]. Bit-reproducible per seed.
Matrix simulate_noise(const NoiseSpec& spec, int n, std::uint64_t seed);

struct SimulationResult {
  Matrix path;   // n x D, row t holds the coordinates of X_{t+1}
  Matrix noise;  // n x D, row t holds the coordinates of eps_{t+1}
};

/// Simulates a length-n trajectory. FMA(q) and GeneralMA draw presample noise;
/// FAR(1) burns in from zero until the start transient is below 1e-8.
SimulationResult simulate(const LinearProcessModel& model, int n,
                          std::uint64_t seed);

/// Coefficients pi_1..pi_M of the autoregressive representation
/// X_n = eps_n + sum_j pi_j X_{n-j}, with a bound on the dropped tail.
struct InverseRepresentation {
  std::vector<Matrix> pi;
  double tail_bound = 0.0;

  double norm_sum() const;
};

/// FMA(1) with ||gamma|| < 1: pi_j = (-1)^{j+1} gamma^j.
/// FAR(1): pi_1 = Phi, exact. Other kinds are refused: invertibility is not
/// certified for them.
InverseRepresentation inverse_representation(const LinearProcessModel& model,
                                             int truncation);

/// psi_1..psi_count of the MA representation (psi_0 = I). Exact for all
/// supported kinds; FAR(1) gives psi_j = Phi^j.
std::vector<Matrix> ma_coefficients(const LinearProcessModel& model,
                                    int count);

}  // namespace flip
