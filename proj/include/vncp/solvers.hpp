#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "vncp/linalg.hpp"
#include "vncp/model.hpp"

namespace vncp {

/// Called with (k, x^k, y^k) for k = 0 and after every full update.
/// The modulus baseline passes an empty y.
using IterateObserver =
    std::function<void(std::size_t, std::span<const double>, std::span<const double>)>;

struct SolverConfig {
  double tau = 1.0;  // FPI only
  SplittingChoice splitting{};
  /// Omega; when unset, omega_scale * I of the instance dimension.
  std::optional<DiagonalMatrix> omega;
  double omega_scale = 5.0;
  double tol = 1e-8;
  std::size_t max_iter = 1000;
  /// Starting vector; all ones when unset.
  std::optional<Vector> x0;
  double divergence_cap = 1e10;
  IterateObserver observer;

  /// Checks tau > 0, tol > 0, max_iter >= 1, omega_scale > 0.
  void validate() const;
  DiagonalMatrix resolve_omega(std::size_t n) const;
  Vector resolve_x0(std::size_t n) const;
};

enum class SolveStatus { Converged, MaxIterReached, Diverged, EvaluationError };

std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterReached;
  std::size_t iterations = 0;
  /// RES at x^0, x^1, ..., x^iterations.
  Vector residual_history;
  double wall_time = 0.0;  // seconds, iteration loop only
  Vector x_final;
  double min_u = 0.0;
  double min_v = 0.0;
  std::string method_label;
  std::string message;

  double final_residual() const { return residual_history.back(); }
};

/// The splitting of C = A + Omega B shared by both solver families.
class SplitSystem {
public:
  SplitSystem(const VncpInstance& inst, DiagonalMatrix omega, SplittingChoice choice);

  const VncpInstance& instance() const noexcept { return *inst_; }
  const DiagonalMatrix& omega() const noexcept { return omega_; }
  const SparseMatrix& C() const noexcept { return c_; }
  const SplittingPlan& plan() const noexcept { return plan_; }

private:
  const VncpInstance* inst_;
  DiagonalMatrix omega_;
  SparseMatrix c_;
  SplittingPlan plan_;
};

struct FpiState {
  Vector x;
  Vector y;
};

/// One application of
///   x' = M^{-1} [N x + y - phi(x) - Omega psi(x)],
///   y' = (1 - tau) y + tau |(A - Omega B) x' + phi(x') - Omega psi(x')|.
FpiState fpi_step(const SplitSystem& system, const FpiState& state, double tau);
FpiState fpi_step(const VncpInstance& inst, const FpiState& state, const SolverConfig& config);

/// y^0 = |(A - Omega B) x^0 + phi(x^0) - Omega psi(x^0)|.
FpiState fpi_initial_state(const SplitSystem& system, std::span<const double> x0);

/// Matrix-splitting fixed-point iteration (FPI-J / FPI-GS / FPI-SOR).
SolveReport fpi_solve(const VncpInstance& inst, const SolverConfig& config);

/// Modulus-based matrix splitting baseline (NMJ / NMGS / NMSOR):
///   M x' = N x + |(A - Omega B) x + phi(x) - Omega psi(x)| - phi(x) - Omega psi(x).
SolveReport nms_solve(const VncpInstance& inst, const SolverConfig& config);

std::string fpi_label(const SolverConfig& config);
std::string nms_label(const SolverConfig& config);

}  // namespace vncp
