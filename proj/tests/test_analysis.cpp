#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "vncp/analysis.hpp"
#include "vncp/errors.hpp"

using namespace vncp;

namespace {

const NonlinearFn kAbs(NonlinearKind::Abs);
const NonlinearFn kZero(NonlinearKind::Zero);

// Sample (alpha, beta, gamma) > 0 with alpha (beta + gamma) < 1.
NormTriple random_feasible(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double a = 0.01 + 2.0 * u(rng);
    const double s = u(rng) / a;
    const double share = u(rng);
    const double b = s * share;
    const double g = s * (1.0 - share);
    if (b > 0.0 && g > 0.0 && a * (b + g) < 1.0) return NormTriple::direct(a, b, g);
  }
}

// Spectral radius via the 2x2 eigenvalues computed in complex arithmetic.
double rho_oracle(const Mat2& m) {
  const std::complex<double> tr = m[0][0] + m[1][1];
  const std::complex<double> det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const std::complex<double> s = std::sqrt(tr * tr - 4.0 * det);
  return std::max(std::abs((tr + s) / 2.0), std::abs((tr - s) / 2.0));
}

Vector reference_solution(const VncpInstance& inst, const DiagonalMatrix& omega) {
  SolverConfig c;
  c.omega = omega;
  c.splitting = {SplittingKind::GaussSeidel};
  c.tol = 1e-28;
  c.max_iter = 2000;
  const auto rep = nms_solve(inst, c);
  REQUIRE(residual(inst, rep.x_final) < 1e-14);
  return rep.x_final;
}

}  // namespace

TEST_SUITE("norm triple") {
  TEST_CASE("diagonal hand instance") {
    const VncpInstance inst(SparseMatrix::diagonal(Vector{2, 2}), SparseMatrix::identity(2), kAbs, kAbs);
    const DiagonalMatrix omega = DiagonalMatrix::scalar(2, 1.0);
    const SplittingPlan plan = split(add_row_scaled(inst.A(), omega.entries(), inst.B()), {});
    const NormTriple t0 = compute_norm_triple(inst, omega, plan, 0.0, 0.0);
    CHECK(t0.alpha_norm == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(t0.beta == 0.0);
    CHECK(t0.gamma == doctest::Approx(1.0));
    CHECK(t0.warnings.empty());
    const TauRange r = tau_range(t0);
    CHECK(r.feasible);
    CHECK(r.upper_thm32 == doctest::Approx(1.5));

    const NormTriple t1 = compute_norm_triple(inst, omega, plan, 1.0, 1.0);
    CHECK(t1.beta == doctest::Approx(2.0));
    CHECK(t1.gamma == doctest::Approx(3.0));
    CHECK_THROWS_AS(compute_norm_triple(inst, omega, plan, -1.0, 0.0), InvalidParameter);
  }

  TEST_CASE("Example 4.1 with Omega = 5I") {
    auto ex = generate_example_4_1(20);
    const VncpInstance inst(ex.A, ex.B, kAbs, kAbs);
    const DiagonalMatrix omega = DiagonalMatrix::scalar(20, 5.0);
    const auto c = add_row_scaled(inst.A(), omega.entries(), inst.B());
    const NormTriple t = compute_norm_triple(inst, omega, split(c, {SplittingKind::Jacobi}), 1, 1);
    CHECK(t.omega_norm == 5.0);
    CHECK(t.alpha_norm == doctest::Approx(1.0 / 28.0));
    // N = tridiag(6, 0, 6) and A - 5B = tridiag(4, -12, 4), both symmetric Toeplitz.
    const double c1 = std::cos(M_PI / 21.0);
    CHECK(t.norm_N == doctest::Approx(12.0 * c1).epsilon(1e-8));
    CHECK(t.norm_A_minus_omega_B == doctest::Approx(12.0 + 8.0 * c1).epsilon(1e-8));
    CHECK(t.beta == doctest::Approx(12.0 * c1 + 6.0).epsilon(1e-8));
  }
}

TEST_SUITE("tau range") {
  TEST_CASE("substitution examples") {
    const TauRange r = tau_range(NormTriple::direct(0.5, 0.5, 0.4));
    CHECK(r.feasible);
    CHECK(r.upper_thm31 == doctest::Approx(2.0 * 0.75 / 0.95).epsilon(1e-14));
    CHECK(r.upper_thm31 == doctest::Approx(1.578947).epsilon(1e-6));
    CHECK(r.upper_thm32 == doctest::Approx(1.379310).epsilon(1e-6));

    CHECK_FALSE(tau_range(NormTriple::direct(1, 1, 1)).feasible);

    const TauRange eq = tau_range(NormTriple::direct(0.4, 0.5, 0.5));
    CHECK(eq.upper_thm31 == doctest::Approx(1.6));
    CHECK(eq.upper_thm32 == doctest::Approx(1.428571).epsilon(1e-6));
  }

  TEST_CASE("the second range is strictly inside the first") {
    std::mt19937 rng(1234);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
      const TauRange r = tau_range(random_feasible(rng));
      violations += !(r.feasible && r.upper_thm32 < r.upper_thm31);
    }
    CHECK(violations == 0);
  }
}

TEST_SUITE("iteration matrices") {
  TEST_CASE("tau = 1") {
    const auto m = iteration_matrices(NormTriple::direct(0.5, 0.5, 0.4), 1.0);
    CHECK(m.T_gamma[0][0] == doctest::Approx(0.25));
    CHECK(m.T_gamma[0][1] == doctest::Approx(0.2));
    CHECK(m.T_gamma[1][0] == doctest::Approx(0.25));
    CHECK(m.T_gamma[1][1] == doctest::Approx(0.2));
    CHECK(m.inf_norm_T_gamma == doctest::Approx(0.45));
  }

  TEST_CASE("small tau") {
    const auto m = iteration_matrices(NormTriple::direct(0.5, 0.5, 0.4), 1e-9);
    CHECK(m.inf_norm_T_gamma == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(iteration_matrices(NormTriple::direct(0.5, 0.5, 0.4), 0.0), InvalidParameter);
  }

  TEST_CASE("spectral radius against complex eigenvalues") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
      const Mat2 m{{{u(rng), u(rng)}, {u(rng), u(rng)}}};
      CHECK(spectral_radius(m) == doctest::Approx(rho_oracle(m)).epsilon(1e-9).scale(1e-12));
    }
    // Rotation by 90 degrees scaled by 0.7.
    CHECK(spectral_radius(Mat2{{{0.0, -0.7}, {0.7, 0.0}}}) == doctest::Approx(0.7));
  }

  TEST_CASE("spectral radius below one over the first range") {
    const NormTriple t = NormTriple::direct(0.5, 0.5, 0.4);
    const double upper = tau_range(t).upper_thm31;
    for (int k = 1; k <= 40; ++k) {
      const double tau = upper * k / 41.0;
      const auto m = iteration_matrices(t, tau);
      CHECK(m.spectral_radius_T < 1.0);
      CHECK(rho_oracle(m.T) < 1.0);
    }
    CHECK(iteration_matrices(t, upper * 1.01).spectral_radius_T >= 1.0);
  }

  TEST_CASE("spectral radius inside and outside the first range for random triples") {
    std::mt19937 rng(4321);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      const NormTriple t = random_feasible(rng);
      const double upper = tau_range(t).upper_thm31;
      for (int k = 1; k <= 10; ++k)
        violations += !(iteration_matrices(t, upper * k / 11.0).spectral_radius_T < 1.0);
      for (int k = 0; k < 5; ++k) {
        const double tau = upper + 1e-6 + u(rng) * upper;
        violations += !(iteration_matrices(t, tau).spectral_radius_T >= 1.0);
      }
    }
    CHECK(violations == 0);
  }
}

TEST_SUITE("step estimate") {
  TEST_CASE("logarithm arithmetic") {
    const StepEstimate a = step_estimate_from_xi(0.5, 1.0, 1e-8);
    CHECK(a.c == doctest::Approx(1e-8));
    CHECK(a.k_min == 27);
    CHECK(step_estimate_from_xi(0.9, 1.0, 1e-4).k_min == 88);
    CHECK(step_estimate_from_xi(0.5, 1e-9, 1e-8).k_min == 0);
    CHECK(step_estimate_from_xi(0.5, 1e-8, 1e-8).k_min == 0);
    CHECK(step_estimate_from_xi(0.5, 0.0, 1e-8).k_min == 0);
    CHECK_THROWS_AS(step_estimate_from_xi(1.0, 1.0, 1e-8), InvalidParameter);
    CHECK_THROWS_AS(step_estimate_from_xi(0.5, 1.0, 0.0), InvalidParameter);
  }

  TEST_CASE("from a triple") {
    const NormTriple t = NormTriple::direct(0.5, 0.5, 0.4);
    const StepEstimate s = step_estimate(t, 1.0, 1.0, 1e-8, 0.0);
    CHECK(s.xi == doctest::Approx(0.45));
    CHECK(s.k_min == static_cast<std::size_t>(std::floor(std::log(1e-8) / std::log(0.45))) + 1);
    CHECK(step_estimate(t, 1.0, 1.0, 1e-8).xi == doctest::Approx(0.45 + 1e-6));
    CHECK_THROWS_AS(step_estimate(NormTriple::direct(1, 1, 1), 1.0, 1.0, 1e-8), InfeasibleEstimate);
  }
}

TEST_SUITE("error trace") {
  TEST_CASE("started at the solution") {
    auto ex = generate_example_4_1(50);
    const VncpInstance inst(ex.A, ex.B, kAbs, kAbs);
    const DiagonalMatrix omega = DiagonalMatrix::scalar(50, 5.0);
    const Vector xs = reference_solution(inst, omega);
    SolverConfig cfg;
    cfg.x0 = xs;
    cfg.tol = 1e-300;
    cfg.max_iter = 5;
    const ErrorTrace tr = error_trace(inst, omega, cfg, xs);
    for (double e : tr.error_x) CHECK(e <= 1e-12);
    for (double e : tr.error_y) CHECK(e <= 1e-12);
    CHECK_THROWS_AS(error_trace(inst, omega, cfg, Vector(50, 1.0)), InvalidParameter);
  }

  TEST_CASE("contraction on Example 4.1 with Gauss-Seidel") {
    auto ex = generate_example_4_1(100);
    const VncpInstance inst(ex.A, ex.B, kAbs, kAbs);
    const DiagonalMatrix omega = DiagonalMatrix::scalar(100, 5.0);
    const Vector xs = reference_solution(inst, omega);
    const SplitSystem sys(inst, omega, {SplittingKind::GaussSeidel});
    const TauRange range = tau_range(compute_norm_triple(inst, omega, sys.plan(), 1, 1));
    for (double tau : {0.95, range.upper_thm32 / 2.0, range.upper_thm32 * 0.9}) {
      SolverConfig cfg;
      cfg.splitting = {SplittingKind::GaussSeidel};
      cfg.tau = tau;
      cfg.tol = 1e-26;
      cfg.max_iter = 400;
      const ErrorTrace tr = error_trace(inst, omega, cfg, xs);
      const double bound = tr.matrices.inf_norm_T_gamma + 1e-10;
      REQUIRE(tr.weighted.size() > 3);
      for (std::size_t k = 0; k + 1 < tr.weighted.size(); ++k) {
        if (tr.weighted[k] < 1e-11) break;
        CHECK(tr.weighted[k + 1] <= bound * tr.weighted[k]);
        CHECK(tr.weighted[k + 1] < tr.weighted[k]);
      }
    }
  }

  TEST_CASE("step estimate is sound on a feasible instance") {
    // Omega = I, phi = |x|, psi = 0: C = tridiag(-2, 12, -2), A - B = 4I.
    auto ex = generate_example_4_1(60);
    const VncpInstance inst(ex.A, ex.B, kAbs, kZero);
    const DiagonalMatrix omega = DiagonalMatrix::scalar(60, 1.0);
    const Vector xs = reference_solution(inst, omega);
    const SplitSystem sys(inst, omega, {SplittingKind::Jacobi});
    const NormTriple t = compute_norm_triple(inst, omega, sys.plan(), 1.0, 0.0);
    CHECK(t.alpha_norm == doctest::Approx(1.0 / 12.0));
    CHECK(t.gamma == doctest::Approx(5.0));
    CHECK(t.beta == doctest::Approx(1.0 + 4.0 * std::cos(M_PI / 61.0)).epsilon(1e-8));
    const TauRange range = tau_range(t);
    REQUIRE(range.feasible);
    for (double frac : {0.25, 0.5, 0.75, 0.95}) {
      const double tau = frac * range.upper_thm32;
      SolverConfig cfg;
      cfg.tau = tau;
      cfg.tol = 1e-300;
      cfg.max_iter = 2000;
      const ErrorTrace tr = error_trace(inst, omega, cfg, xs);
      const double delta = 1e-8;
      const StepEstimate s = step_estimate(t, tau, tr.weighted.front(), delta);
      const std::size_t k = std::min(s.k_min, tr.weighted.size() - 1);
      if (k < s.k_min) CHECK(tr.report.status == SolveStatus::Converged);
      CHECK(tr.weighted[k] < delta);
      CHECK(s.k_min > 0);
    }
  }
}
