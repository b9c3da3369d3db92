#include "vncp/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "vncp/errors.hpp"

namespace vncp {

void SolverConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("tau must be positive");
  if (!(tol > 0.0)) throw InvalidParameter("tol must be positive");
  if (max_iter < 1) throw InvalidParameter("max_iter must be at least 1");
  if (!omega && !(omega_scale > 0.0)) throw InvalidParameter("omega scale must be positive");
  if (!(divergence_cap > 0.0)) throw InvalidParameter("divergence cap must be positive");
}

DiagonalMatrix SolverConfig::resolve_omega(std::size_t n) const {
  if (omega) {
    if (omega->size() != n) throw InvalidParameter("Omega dimension does not match the instance");
    return *omega;
  }
  return DiagonalMatrix::scalar(n, omega_scale);
}

Vector SolverConfig::resolve_x0(std::size_t n) const {
  if (x0) {
    if (x0->size() != n) throw InvalidParameter("x0 dimension does not match the instance");
    return *x0;
  }
  return Vector(n, 1.0);
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterReached: return "max_iter_reached";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::EvaluationError: return "evaluation_error";
  }
  return "unknown";
}

SplitSystem::SplitSystem(const VncpInstance& inst, DiagonalMatrix omega, SplittingChoice choice)
    : inst_(&inst),
      omega_(std::move(omega)),
      c_(add_row_scaled(inst.A(), omega_.entries(), inst.B())),
      plan_(split(c_, choice)) {
  if (omega_.size() != inst.size()) throw InvalidParameter("Omega dimension mismatch");
}

namespace {

/// Quantities at one iterate, reused by the residual, the modulus term and
/// the next right-hand side.
struct Evaluation {
  Vector ax;
  Vector bx;
  Vector phi;
  Vector psi;
  double res = 0.0;
};

Evaluation evaluate(const SplitSystem& sys, std::span<const double> x) {
  const VncpInstance& inst = sys.instance();
  Evaluation e{inst.A().multiply(x), inst.B().multiply(x), inst.phi()(x), inst.psi()(x), 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    e.res += std::abs(e.ax[i] + e.phi[i]) * std::abs(e.bx[i] + e.psi[i]);
  }
  return e;
}

Vector modulus(const SplitSystem& sys, const Evaluation& e) {
  const auto w = sys.omega().entries();
  Vector y(e.ax.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = std::abs(e.ax[i] - w[i] * e.bx[i] + e.phi[i] - w[i] * e.psi[i]);
  return y;
}

/// N x + extra - phi - Omega psi
Vector rhs(const SplitSystem& sys, std::span<const double> x, std::span<const double> extra,
           const Evaluation& e) {
  const auto w = sys.omega().entries();
  Vector r = sys.plan().N().multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += extra[i] - e.phi[i] - w[i] * e.psi[i];
  return r;
}

void update_y(Vector& y, const Vector& fresh, double tau) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (1.0 - tau) * y[i] + tau * fresh[i];
}

void finish_feasibility(SolveReport& report, const Evaluation* e) {
  if (e == nullptr) {
    report.min_u = report.min_v = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double mu = std::numeric_limits<double>::infinity();
  double mv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e->ax.size(); ++i) {
    mu = std::min(mu, e->ax[i] + e->phi[i]);
    mv = std::min(mv, e->bx[i] + e->psi[i]);
  }
  report.min_u = mu;
  report.min_v = mv;
}

std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string suffix(SplittingKind kind) {
  switch (kind) {
    case SplittingKind::Jacobi: return "J";
    case SplittingKind::GaussSeidel: return "GS";
    case SplittingKind::SOR: return "SOR";
  }
  return "";
}

/// Shared iteration driver. `advance` maps the current iterate (and its
/// evaluation) to the next x; `after` runs once the new evaluation exists.
template <class Advance, class After>
SolveReport iterate(const SplitSystem& sys, const SolverConfig& config, Vector x,
                    Advance advance, After after,
                    const std::function<std::span<const double>()>& current_y) {
  SolveReport report;
  const auto start = std::chrono::steady_clock::now();
  auto stamp = [&] {
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Evaluation e;
  try {
    e = evaluate(sys, x);
  } catch (const Error& err) {
    report.status = SolveStatus::EvaluationError;
    report.message = err.what();
    report.residual_history.push_back(std::numeric_limits<double>::quiet_NaN());
    report.x_final = std::move(x);
    finish_feasibility(report, nullptr);
    stamp();
    return report;
  }
  report.residual_history.push_back(e.res);
  if (config.observer) config.observer(0, x, current_y());

  auto done = [&](SolveStatus status) {
    report.status = status;
    stamp();
    report.x_final = x;
    finish_feasibility(report, &e);
    return report;
  };

  if (!std::isfinite(e.res) || e.res > config.divergence_cap) return done(SolveStatus::Diverged);
  if (e.res < config.tol) return done(SolveStatus::Converged);

  for (std::size_t k = 1; k <= config.max_iter; ++k) {
    Vector next = advance(x, e);
    report.iterations = k;
    if (!all_finite(next)) {
      report.residual_history.push_back(std::numeric_limits<double>::infinity());
      report.status = SolveStatus::Diverged;
      report.message = "non-finite iterate";
      stamp();
      report.x_final = std::move(next);
      finish_feasibility(report, nullptr);
      return report;
    }
    x = std::move(next);
    try {
      e = evaluate(sys, x);
      after(e);
    } catch (const Error& err) {
      report.residual_history.push_back(std::numeric_limits<double>::quiet_NaN());
      report.status = SolveStatus::EvaluationError;
      report.message = err.what();
      stamp();
      report.x_final = x;
      finish_feasibility(report, nullptr);
      return report;
    }
    report.residual_history.push_back(e.res);
    if (config.observer) config.observer(k, x, current_y());
    if (!std::isfinite(e.res) || e.res > config.divergence_cap) {
      report.message = "residual exceeded divergence cap";
      return done(SolveStatus::Diverged);
    }
    if (e.res < config.tol) return done(SolveStatus::Converged);
  }
  return done(SolveStatus::MaxIterReached);
}

}  // namespace

FpiState fpi_initial_state(const SplitSystem& system, std::span<const double> x0) {
  const Evaluation e = evaluate(system, x0);
  return {Vector(x0.begin(), x0.end()), modulus(system, e)};
}

FpiState fpi_step(const SplitSystem& system, const FpiState& state, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be positive");
  const Evaluation e = evaluate(system, state.x);
  FpiState next{solve_with_M(system.plan(), rhs(system, state.x, state.y, e)), state.y};
  update_y(next.y, modulus(system, evaluate(system, next.x)), tau);
  return next;
}

FpiState fpi_step(const VncpInstance& inst, const FpiState& state, const SolverConfig& config) {
  config.validate();
  const SplitSystem sys(inst, config.resolve_omega(inst.size()), config.splitting);
  return fpi_step(sys, state, config.tau);
}

std::string fpi_label(const SolverConfig& config) {
  std::string label = "FPI-" + suffix(config.splitting.kind) + "(tau=" +
                      format_number(config.tau);
  if (config.splitting.kind == SplittingKind::SOR)
    label += ",alpha=" + format_number(config.splitting.relaxation_alpha);
  return label + ")";
}

std::string nms_label(const SolverConfig& config) {
  std::string label = "NM" + suffix(config.splitting.kind);
  if (config.splitting.kind == SplittingKind::SOR)
    label += "(alpha=" + format_number(config.splitting.relaxation_alpha) + ")";
  return label;
}

SolveReport fpi_solve(const VncpInstance& inst, const SolverConfig& config) {
  config.validate();
  const SplitSystem sys(inst, config.resolve_omega(inst.size()), config.splitting);
  Vector x0 = config.resolve_x0(inst.size());

  Vector y;
  SolveReport report;
  try {
    y = fpi_initial_state(sys, x0).y;
  } catch (const Error& err) {
    report.status = SolveStatus::EvaluationError;
    report.message = err.what();
    report.residual_history.push_back(std::numeric_limits<double>::quiet_NaN());
    report.x_final = std::move(x0);
    report.min_u = report.min_v = std::numeric_limits<double>::quiet_NaN();
    report.method_label = fpi_label(config);
    return report;
  }
  const double tau = config.tau;
  report = iterate(
      sys, config, std::move(x0),
      [&](const Vector& x, const Evaluation& e) {
        return solve_with_M(sys.plan(), rhs(sys, x, y, e));
      },
      [&](const Evaluation& e) { update_y(y, modulus(sys, e), tau); },
      [&]() { return std::span<const double>(y); });
  report.method_label = fpi_label(config);
  return report;
}

SolveReport nms_solve(const VncpInstance& inst, const SolverConfig& config) {
  config.validate();
  const SplitSystem sys(inst, config.resolve_omega(inst.size()), config.splitting);
  SolveReport report = iterate(
      sys, config, config.resolve_x0(inst.size()),
      [&](const Vector& x, const Evaluation& e) {
        return solve_with_M(sys.plan(), rhs(sys, x, modulus(sys, e), e));
      },
      [](const Evaluation&) {}, []() { return std::span<const double>(); });
  report.method_label = nms_label(config);
  return report;
}

}  // namespace vncp
