#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error_analysis.hpp"
#include "errors.hpp"

using namespace flip;

namespace {

LinearProcessModel scalar_fma1(double gamma, double alpha = 1.0) {
  LinearProcessModel m;
  m.kind = ModelKind::fma;
  m.dim = 1;
  m.coeffs = {Matrix::Constant(1, 1, gamma)};
  m.noise.eigenvalues = Vector::Constant(1, alpha);
  return m;
}

LinearProcessModel scalar_far1(double phi, double alpha = 1.0) {
  LinearProcessModel m;
  m.kind = ModelKind::far1;
  m.dim = 1;
  m.coeffs = {Matrix::Constant(1, 1, phi)};
  m.noise.eigenvalues = Vector::Constant(1, alpha);
  return m;
}

// Ambient-4 FMA(1) with a nontrivial eigenbasis and decaying noise.
LinearProcessModel ambient4_fma1() {
  LinearProcessModel m;
  m.kind = ModelKind::fma;
  m.dim = 4;
  Matrix gamma(4, 4);
  gamma << 0.30, 0.10, 0.00, 0.05,
          -0.10, 0.25, 0.05, 0.00,
           0.00, 0.05, 0.20, 0.10,
           0.05, 0.00, -0.05, 0.15;
  m.coeffs = {gamma};
  m.noise.eigenvalues = Vector(4);
  m.noise.eigenvalues << 1.0, 0.5, 0.25, 0.125;
  return m;
}

std::vector<int> log_schedule(int length, int cap) {
  std::vector<int> schedule(length);
  for (int n = 1; n <= length; ++n)
    schedule[n - 1] =
        std::min(static_cast<int>(std::floor(std::log2(n))) + 1, cap);
  return schedule;
}

}  // namespace

TEST_CASE("full-dimension decomposition has no tail term") {
  LinearProcessModel m = ambient4_fma1();
  const ErrorReport r = error_decomposition(m, 4, 20, 2000, 7);
  CHECK(r.tail_sum == 0.0);
  CHECK(std::abs(r.mc_mse - r.v_nuclear) <= 3.0 * r.mc_stderr);
}

TEST_CASE("white noise decomposition splits into projected and dropped noise") {
  LinearProcessModel m = ambient4_fma1();
  m.coeffs = {Matrix::Zero(4, 4)};
  const ErrorReport r = error_decomposition(m, 2, 10, 2000, 9);
  // v_nuclear is the projected noise trace for every n; the tail is the rest.
  CHECK(r.v_nuclear == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(r.tail_sum == doctest::Approx(0.375).epsilon(1e-10));
  CHECK(std::abs(r.mc_mse - r.noise_floor) <= 3.0 * r.mc_stderr);
}

TEST_CASE("decomposition identity holds within monte carlo error") {
  const ErrorReport r = error_decomposition(ambient4_fma1(), 2, 30, 2000, 11);
  CHECK(std::abs(r.residual()) <= 3.0 * r.mc_stderr);
}

TEST_CASE("larger projection spaces cannot hurt the predictor") {
  LinearProcessModel m = ambient4_fma1();
  double prev = std::numeric_limits<double>::infinity();
  double prev_se = 0.0;
  for (int dim = 1; dim <= 4; ++dim) {
    const ErrorReport r = error_decomposition(m, dim, 15, 2000, 13);
    CHECK(r.mc_mse <= prev + 3.0 * (r.mc_stderr + prev_se));
    prev = r.mc_mse;
    prev_se = r.mc_stderr;
  }
}

TEST_CASE("white noise keeps v_nuclear constant in n") {
  LinearProcessModel m = ambient4_fma1();
  m.coeffs = {Matrix::Zero(4, 4)};
  const auto reports = noise_floor_convergence(m, 3, {1, 5, 20}, 0, 1);
  for (const ErrorReport& r : reports)
    CHECK(r.v_nuclear == doctest::Approx(reports.front().v_nuclear));
}

TEST_CASE("scalar ma(1) innovation variance flattens by n=50") {
  const auto reports =
      noise_floor_convergence(scalar_fma1(0.5), 1, {5, 49, 50}, 0, 1);
  CHECK(std::abs(reports[2].v_nuclear - reports[1].v_nuclear) < 1e-6);
  CHECK(reports[0].v_nuclear > reports[2].v_nuclear);
}

TEST_CASE("scalar far(1) one-step error is the noise variance immediately") {
  const auto reports =
      noise_floor_convergence(scalar_far1(0.8), 1, {1, 50}, 0, 1);
  CHECK(std::abs(reports[1].v_nuclear - 1.0) <= 1e-4);
  CHECK(std::abs(reports[0].v_nuclear - 1.0) <= 1e-4);
}

TEST_CASE("rate bound tails specialize for far(1) and full-dimension models") {
  // FAR(1): pi vanishes beyond lag one, so only the eigenvalue tail remains.
  LinearProcessModel far;
  far.kind = ModelKind::far1;
  far.dim = 2;
  Matrix phi = Matrix::Zero(2, 2);
  phi(0, 0) = 0.6;
  phi(1, 1) = 0.3;
  far.coeffs = {phi};
  far.noise.eigenvalues = Vector(2);
  far.noise.eigenvalues << 1.0, 0.5;
  const EigenbasisView view = eigenbasis_view(far, 16);
  const InverseRepresentation invrep = inverse_representation(far, 16);
  const std::vector<int> schedule(17, 1);
  const RateBound rb =
      rate_bound(invrep, schedule, 2, view.lambdas, 8, view.covs, 256);
  CHECK(rb.pi_tail == 0.0);
  CHECK(rb.bound == doctest::Approx(rb.lambda_tail));
  CHECK(rb.lambda_tail > 0.0);

  // Scalar ambient: no eigenvalue tail once d >= 1, only the pi tail.
  LinearProcessModel ma = scalar_fma1(0.5);
  const EigenbasisView view1 = eigenbasis_view(ma, 16);
  const InverseRepresentation inv1 = inverse_representation(ma, 16);
  const RateBound rb1 = rate_bound(inv1, std::vector<int>(17, 1), 3,
                                   view1.lambdas, 8, view1.covs, 256);
  CHECK(rb1.lambda_tail == 0.0);
  CHECK(rb1.bound == doctest::Approx(rb1.pi_tail));
  CHECK(rb1.pi_tail > 0.0);
}

TEST_CASE("rate bound decreases along a growing schedule") {
  LinearProcessModel m = ambient4_fma1();
  const int n_top = 64;
  const EigenbasisView view = eigenbasis_view(m, n_top);
  const InverseRepresentation invrep = inverse_representation(m, n_top);
  const std::vector<int> schedule = log_schedule(n_top + 1, 4);
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {4, 16, 64}) {
    const int m_n = std::max(1, static_cast<int>(std::ceil(std::sqrt(n))));
    const RateBound rb =
        rate_bound(invrep, schedule, m_n, view.lambdas, n, view.covs, 128);
    CHECK(rb.bound < prev);
    prev = rb.bound;
  }
}

TEST_CASE("white noise excess error is exactly zero") {
  LinearProcessModel m = ambient4_fma1();
  m.coeffs = {Matrix::Zero(4, 4)};
  const MeanStderr e = excess_error_mc(m, {1, 2, 2, 3, 3, 4}, 5, 200, 3);
  CHECK(e.mean <= 1e-28);
}

TEST_CASE("scalar far(1) excess error vanishes with one full coordinate") {
  const MeanStderr e =
      excess_error_mc(scalar_far1(0.8), std::vector<int>(31, 1), 30, 400, 5);
  CHECK(std::abs(e.mean) <= 3.0 * e.stderr_ + 1e-12);
}

TEST_CASE("excess error decreases with sample size") {
  // Ambient 6 with a schedule that never catches up: the eigenvalue tail
  // 2^{-d_n} drives a clean downward trend.
  LinearProcessModel m;
  m.kind = ModelKind::fma;
  m.dim = 6;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix gamma(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) gamma(r, c) = u(rng);
  gamma *= 0.6 / operator_norm(gamma);
  m.coeffs = {gamma};
  m.noise.eigenvalues.resize(6);
  for (int i = 0; i < 6; ++i) m.noise.eigenvalues(i) = std::pow(2.0, -i);
  std::vector<int> schedule(201);
  for (int n = 1; n <= 201; ++n)
    schedule[n - 1] = std::clamp(
        static_cast<int>(std::floor(std::log2(n))) - 1, 1, 6);
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {10, 50, 200}) {
    const MeanStderr e = excess_error_mc(m, schedule, n, 500, 17);
    CHECK(e.mean < prev);
    prev = e.mean;
  }
}

TEST_CASE("theta converges to the moving-average coefficient") {
  // Scalar MA(1): theta_{1,n,1} -> gamma = 0.5 from below.
  const ThetaConvergence t =
      theta_convergence(scalar_fma1(0.5), std::vector<int>(51, 1), {5, 50}, 1);
  CHECK(t.distance(1, 0) < t.distance(0, 0));
  CHECK(t.distance(1, 0) <= 1e-6);

  // White noise: theta = 0 = psi at every lag.
  LinearProcessModel wn = ambient4_fma1();
  wn.coeffs = {Matrix::Zero(4, 4)};
  const ThetaConvergence tw =
      theta_convergence(wn, std::vector<int>(21, 4), {5, 20}, 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(tw.distance(0, i) <= 1e-12);
    CHECK(tw.distance(1, i) <= 1e-12);
  }

  // FMA(1) at full ambient dimension: lag one improves with n, lag two is
  // identically zero on both sides (theta vanishes beyond q* and psi_2 = 0).
  const ThetaConvergence t2 = theta_convergence(
      ambient4_fma1(), std::vector<int>(51, 4), {5, 50}, 2);
  CHECK(t2.distance(1, 0) < t2.distance(0, 0));
  CHECK(t2.distance(0, 1) <= 1e-12);
  CHECK(t2.distance(1, 1) <= 1e-12);

  // Full-dimension FAR(1) is Markov, so theta_{n,i} = Phi^i = psi_i exactly
  // once n >= i; the distances are flat at rounding level.
  LinearProcessModel far;
  far.kind = ModelKind::far1;
  far.dim = 2;
  Matrix phi(2, 2);
  phi << 0.5, 0.2, -0.1, 0.4;
  far.coeffs = {phi};
  far.noise.eigenvalues = Vector(2);
  far.noise.eigenvalues << 1.0, 0.5;
  const ThetaConvergence t3 =
      theta_convergence(far, std::vector<int>(51, 2), {5, 50}, 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(t3.distance(0, i) <= 1e-12);
    CHECK(t3.distance(1, i) <= 1e-12);
  }

  // FMA(2) has a genuine lag-2 transient: theta_{n,2} -> gamma_2.
  LinearProcessModel ma2;
  ma2.kind = ModelKind::fma;
  ma2.dim = 2;
  Matrix g1(2, 2), g2(2, 2);
  g1 << 0.4, 0.1, -0.1, 0.3;
  g2 << 0.2, 0.0, 0.1, -0.2;
  ma2.coeffs = {g1, g2};
  ma2.noise.eigenvalues = Vector(2);
  ma2.noise.eigenvalues << 1.0, 0.5;
  const ThetaConvergence t4 =
      theta_convergence(ma2, std::vector<int>(51, 2), {5, 50}, 2);
  CHECK(t4.distance(0, 1) > 1e-6);
  CHECK(t4.distance(1, 1) < t4.distance(0, 1));
}

TEST_CASE("prediction error approaches the noise floor with more history") {
  // Strong dependence keeps the n=10 gap well above Monte Carlo noise.
  LinearProcessModel m = scalar_fma1(0.95);
  const ErrorReport early = error_decomposition(m, 1, 10, 8000, 101);
  const ErrorReport late = error_decomposition(m, 1, 200, 8000, 102);
  CHECK(early.mc_mse - early.noise_floor > late.mc_mse - late.noise_floor);
  // The exact counterpart of the same trend.
  CHECK(late.v_nuclear < early.v_nuclear);
  CHECK(late.v_nuclear == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("monte carlo results do not depend on the worker count") {
  LinearProcessModel m = ambient4_fma1();
  setenv("FLIP_THREADS", "1", 1);
  const ErrorReport serial = error_decomposition(m, 2, 12, 400, 3);
  setenv("FLIP_THREADS", "4", 1);
  const ErrorReport parallel = error_decomposition(m, 2, 12, 400, 3);
  unsetenv("FLIP_THREADS");
  CHECK(serial.mc_mse == parallel.mc_mse);
  CHECK(serial.mc_stderr == parallel.mc_stderr);
}

TEST_CASE("lemma checks pass for an invertible model") {
  const LemmaReport r = lemma_checks(ambient4_fma1(), 4, 10, 10, 256);
  CHECK(r.cauchy_pass);
  CHECK(r.cauchy_excess <= 1e-8);
  CHECK(r.block_pass);
  CHECK(r.spectral_pass);
  CHECK(r.alpha > 0.0);
}

TEST_CASE("lemma checks for white noise are tight") {
  LinearProcessModel m = ambient4_fma1();
  m.coeffs = {Matrix::Zero(4, 4)};
  const LemmaReport r = lemma_checks(m, 4, 6, 5, 128);
  // Equality at h=0, j=l: the excess reaches exactly zero.
  CHECK(std::abs(r.cauchy_excess) <= 1e-12);
  CHECK(r.block_pass);
  CHECK(r.spectral_pass);
  CHECK(r.alpha ==
        doctest::Approx(0.125 / (2.0 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("boundary model fails the spectral lemma without crashing") {
  const LemmaReport r = lemma_checks(scalar_fma1(1.0), 1, 6, 4, 256);
  CHECK_FALSE(r.spectral_pass);
  CHECK(std::abs(r.alpha) <= 1e-10);
  CHECK(r.cauchy_pass);
}
