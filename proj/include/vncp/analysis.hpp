#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "vncp/linalg.hpp"
#include "vncp/model.hpp"
#include "vncp/solvers.hpp"

namespace vncp {

/// Constants of the convergence theory for one splitting:
///   alpha = ||M^{-1}||, beta = ||N|| + L1 + L2 ||Omega||, gamma = ||A - Omega B|| + L1 + L2 ||Omega||.
struct NormTriple {
  double alpha_norm = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double omega_norm = 0.0;
  double norm_N = 0.0;
  double norm_A_minus_omega_B = 0.0;
  std::vector<std::string> warnings;

  /// Builds a triple from its constituent norms.
  static NormTriple from_norms(double alpha_norm, double norm_N, double norm_A_minus_omega_B,
                               double L1, double L2, double omega_norm);
  /// Builds a triple directly from (alpha, beta, gamma).
  static NormTriple direct(double alpha_norm, double beta, double gamma);
};

NormTriple compute_norm_triple(const VncpInstance& inst, const DiagonalMatrix& omega,
                               const SplittingPlan& plan, double L1, double L2);

/// Admissible tau intervals (0, upper_thm31) and (0, upper_thm32).
struct TauRange {
  bool feasible = false;  // alpha (beta + gamma) < 1
  double upper_thm31 = 0.0;
  double upper_thm32 = 0.0;
};

TauRange tau_range(const NormTriple& triple);

using Mat2 = std::array<std::array<double, 2>, 2>;

struct IterationMatrices {
  /// [[a b, a], [tau g a b, tau g a + |1-tau|]]
  Mat2 T{};
  /// [[a b, a g], [tau a b, tau a g + |1-tau|]]
  Mat2 T_gamma{};
  double spectral_radius_T = 0.0;
  double inf_norm_T_gamma = 0.0;
};

IterationMatrices iteration_matrices(const NormTriple& triple, double tau);

/// Spectral radius of a real 2x2 matrix from its characteristic polynomial.
double spectral_radius(const Mat2& m);

struct StepEstimate {
  double delta = 0.0;
  double xi = 0.0;
  double c = 0.0;
  std::size_t k_min = 0;
};

inline constexpr double kDefaultXiMargin = 1e-6;

/// Smallest k with k > log(c) / log(xi), where c = delta / ||E_gamma^(0)||_inf and
/// xi = min(||T_gamma||_inf + xi_margin, 1 - 1e-12). Throws InfeasibleEstimate
/// when ||T_gamma||_inf >= 1.
StepEstimate step_estimate(const NormTriple& triple, double tau, double e0_weighted_norm,
                           double delta, double xi_margin = kDefaultXiMargin);
/// Same bound given xi directly.
StepEstimate step_estimate_from_xi(double xi, double e0_weighted_norm, double delta);

struct ErrorTrace {
  std::vector<double> error_x;   // ||x^k - x*||_2
  std::vector<double> error_y;   // ||y^k - y*||_2
  std::vector<double> weighted;  // max(gamma ||e_x||, ||e_y||)
  NormTriple triple;
  IterationMatrices matrices;
  SolveReport report;
};

/// Runs FPI under `config` while recording errors against x_star and
/// y* = |(A - Omega B) x* + phi(x*) - Omega psi(x*)|. L1, L2 are the
/// instance functions' declared Lipschitz constants.
ErrorTrace error_trace(const VncpInstance& inst, const DiagonalMatrix& omega,
                       const SolverConfig& config, std::span<const double> x_star);

}  // namespace vncp
