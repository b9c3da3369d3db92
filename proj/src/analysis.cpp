#include "vncp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vncp/errors.hpp"

namespace vncp {

NormTriple NormTriple::from_norms(double alpha_norm, double norm_N, double norm_A_minus_omega_B,
                                  double L1, double L2, double omega_norm) {
  NormTriple t;
  t.alpha_norm = alpha_norm;
  t.norm_N = norm_N;
  t.norm_A_minus_omega_B = norm_A_minus_omega_B;
  t.L1 = L1;
  t.L2 = L2;
  t.omega_norm = omega_norm;
  t.beta = norm_N + L1 + L2 * omega_norm;
  t.gamma = norm_A_minus_omega_B + L1 + L2 * omega_norm;
  return t;
}

NormTriple NormTriple::direct(double alpha_norm, double beta, double gamma) {
  NormTriple t;
  t.alpha_norm = alpha_norm;
  t.beta = beta;
  t.gamma = gamma;
  t.norm_N = beta;
  t.norm_A_minus_omega_B = gamma;
  return t;
}

NormTriple compute_norm_triple(const VncpInstance& inst, const DiagonalMatrix& omega,
                               const SplittingPlan& plan, double L1, double L2) {
  if (L1 < 0.0 || L2 < 0.0) throw InvalidParameter("Lipschitz constants must be nonnegative");
  if (plan.size() != inst.size() || omega.size() != inst.size())
    throw InvalidParameter("dimension mismatch in compute_norm_triple");

  const NormEstimate alpha = inv_norm_of_M(plan);
  const NormEstimate n_norm = spectral_norm(plan.N());
  const NormEstimate amb = spectral_norm(add_row_scaled(inst.A(), omega.entries(), inst.B(), -1.0));

  NormTriple t =
      NormTriple::from_norms(alpha.value, n_norm.value, amb.value, L1, L2, omega.norm());
  auto warn = [&](const NormEstimate& e, const char* what) {
    if (!e.converged) {
      t.warnings.push_back(std::string("power iteration for ") + what +
                           " hit the iteration cap without converging");
    }
  };
  warn(alpha, "||M^-1||");
  warn(n_norm, "||N||");
  warn(amb, "||A - Omega B||");
  return t;
}

TauRange tau_range(const NormTriple& t) {
  const double ab = t.alpha_norm * t.beta;
  const double ag = t.alpha_norm * t.gamma;
  TauRange r;
  r.feasible = ab + ag < 1.0;
  r.upper_thm31 = 2.0 * (1.0 - ab) / (1.0 - ab + ag);
  r.upper_thm32 = 2.0 / (ab + ag + 1.0);
  return r;
}

double spectral_radius(const Mat2& m) {
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return std::max(std::abs(0.5 * (tr + s)), std::abs(0.5 * (tr - s)));
  }
  // Complex pair: |lambda|^2 = det.
  return std::sqrt(det);
}

IterationMatrices iteration_matrices(const NormTriple& t, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be positive");
  const double a = t.alpha_norm;
  const double b = t.beta;
  const double g = t.gamma;
  const double lag = std::abs(1.0 - tau);
  IterationMatrices out;
  out.T = {{{a * b, a}, {tau * g * a * b, tau * g * a + lag}}};
  out.T_gamma = {{{a * b, a * g}, {tau * a * b, tau * a * g + lag}}};
  out.spectral_radius_T = spectral_radius(out.T);
  out.inf_norm_T_gamma = std::max(a * b + a * g, tau * a * b + tau * a * g + lag);
  return out;
}

StepEstimate step_estimate_from_xi(double xi, double e0_weighted_norm, double delta) {
  if (!(xi > 0.0 && xi < 1.0)) throw InvalidParameter("xi must lie in (0, 1)");
  if (!(delta > 0.0)) throw InvalidParameter("delta must be positive");
  if (!(e0_weighted_norm >= 0.0)) throw InvalidParameter("initial error must be nonnegative");
  StepEstimate s;
  s.delta = delta;
  s.xi = xi;
  s.c = e0_weighted_norm > 0.0 ? delta / e0_weighted_norm : std::numeric_limits<double>::infinity();
  if (s.c >= 1.0) {
    s.k_min = 0;
    return s;
  }
  const double bound = std::log(s.c) / std::log(xi);
  s.k_min = static_cast<std::size_t>(std::floor(bound)) + 1;
  return s;
}

StepEstimate step_estimate(const NormTriple& triple, double tau, double e0_weighted_norm,
                           double delta, double xi_margin) {
  const double norm = iteration_matrices(triple, tau).inf_norm_T_gamma;
  if (!(norm < 1.0)) {
    throw InfeasibleEstimate("||T_gamma||_inf = " + std::to_string(norm) +
                             " >= 1; no contraction bound exists for this tau");
  }
  const double xi = std::min(norm + xi_margin, 1.0 - 1e-12);
  return step_estimate_from_xi(xi, e0_weighted_norm, delta);
}

ErrorTrace error_trace(const VncpInstance& inst, const DiagonalMatrix& omega,
                       const SolverConfig& config, std::span<const double> x_star) {
  if (x_star.size() != inst.size()) throw InvalidParameter("x_star dimension mismatch");
  const double res_star = residual(inst, x_star);
  if (!(res_star < 1e-13))
    throw InvalidParameter("reference solution is not accurate enough (RES >= 1e-13)");

  SolverConfig run = config;
  run.omega = omega;

  ErrorTrace trace;
  const SplitSystem sys(inst, omega, run.splitting);
  trace.triple = compute_norm_triple(inst, omega, sys.plan(), inst.phi().lipschitz(),
                                     inst.psi().lipschitz());
  trace.matrices = iteration_matrices(trace.triple, run.tau);

  const Vector y_star = modulus_term(inst, omega, x_star);
  const double gamma = trace.triple.gamma;
  const Vector xs(x_star.begin(), x_star.end());
  IterateObserver user = config.observer;
  run.observer = [&](std::size_t k, std::span<const double> x, std::span<const double> y) {
    const double ex = distance2(x, xs);
    const double ey = distance2(y, y_star);
    trace.error_x.push_back(ex);
    trace.error_y.push_back(ey);
    trace.weighted.push_back(std::max(gamma * ex, ey));
    if (user) user(k, x, y);
  };
  trace.report = fpi_solve(inst, run);
  return trace;
}

}  // namespace vncp
