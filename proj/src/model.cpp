#include "vncp/model.hpp"

#include <cmath>

#include "vncp/errors.hpp"

namespace vncp {

namespace {

constexpr double kPoleGuard = 1e-14;

}  // namespace

NonlinearFn NonlinearFn::from_name(std::string_view name) {
  if (name == "abs") return NonlinearFn(NonlinearKind::Abs);
  if (name == "sin") return NonlinearFn(NonlinearKind::Sin);
  if (name == "cos") return NonlinearFn(NonlinearKind::Cos);
  if (name == "rational") return NonlinearFn(NonlinearKind::Rational);
  if (name == "zero") return NonlinearFn(NonlinearKind::Zero);
  throw InvalidParameter("unknown nonlinear function '" + std::string(name) +
                         "' (expected abs, sin, cos, rational or zero)");
}

std::string NonlinearFn::name() const {
  switch (kind_) {
    case NonlinearKind::Abs: return "abs";
    case NonlinearKind::Sin: return "sin";
    case NonlinearKind::Cos: return "cos";
    case NonlinearKind::Rational: return "rational";
    case NonlinearKind::Zero: return "zero";
  }
  return "zero";
}

std::string NonlinearFn::label() const {
  switch (kind_) {
    case NonlinearKind::Abs: return "|x|";
    case NonlinearKind::Sin: return "sin(x)";
    case NonlinearKind::Cos: return "cos(x)";
    case NonlinearKind::Rational: return "x/(1+x)";
    case NonlinearKind::Zero: return "0";
  }
  return "0";
}

double NonlinearFn::operator()(double t) const {
  double r = 0.0;
  switch (kind_) {
    case NonlinearKind::Abs: r = std::abs(t); break;
    case NonlinearKind::Sin: r = std::sin(t); break;
    case NonlinearKind::Cos: r = std::cos(t); break;
    case NonlinearKind::Rational: {
      const double den = 1.0 + t;
      if (t == -1.0) throw PoleError("x/(1+x) evaluated at its pole x = -1");
      if (std::abs(den) < kPoleGuard) throw NonFiniteError("x/(1+x) evaluated too close to x = -1");
      r = t / den;
      break;
    }
    case NonlinearKind::Zero: r = 0.0; break;
  }
  if (!std::isfinite(r)) throw NonFiniteError(name() + " produced a non-finite value");
  return r;
}

Vector NonlinearFn::operator()(std::span<const double> x) const {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
  return out;
}

VncpInstance::VncpInstance(SparseMatrix a, SparseMatrix b, NonlinearFn phi, NonlinearFn psi)
    : a_(std::move(a)), b_(std::move(b)), phi_(phi), psi_(psi) {
  if (a_.size() != b_.size()) throw InvalidParameter("A and B must have the same dimension");
}

namespace {

Vector affine(const SparseMatrix& m, NonlinearFn f, std::span<const double> x) {
  if (x.size() != m.size()) throw InvalidParameter("vector length does not match instance");
  Vector out = m.multiply(x);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += f(x[i]);
    if (!std::isfinite(out[i])) throw NonFiniteError("non-finite value in u(x) or v(x)");
  }
  return out;
}

}  // namespace

Vector eval_u(const VncpInstance& inst, std::span<const double> x) {
  return affine(inst.A(), inst.phi(), x);
}

Vector eval_v(const VncpInstance& inst, std::span<const double> x) {
  return affine(inst.B(), inst.psi(), x);
}

double residual(const VncpInstance& inst, std::span<const double> x) {
  const Vector u = eval_u(inst, x);
  const Vector v = eval_v(inst, x);
  double res = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) res += std::abs(u[i]) * std::abs(v[i]);
  return res;
}

Vector modulus_term(const VncpInstance& inst, const DiagonalMatrix& omega,
                    std::span<const double> x) {
  if (omega.size() != inst.size()) throw InvalidParameter("Omega dimension mismatch");
  const Vector ax = inst.A().multiply(x);
  const Vector bx = inst.B().multiply(x);
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = omega[i];
    y[i] = std::abs(ax[i] - w * bx[i] + inst.phi()(x[i]) - w * inst.psi()(x[i]));
  }
  return y;
}

double reformulation_residual(const VncpInstance& inst, const DiagonalMatrix& omega,
                              std::span<const double> x) {
  if (x.size() != inst.size()) throw InvalidParameter("vector length does not match instance");
  const Vector ax = inst.A().multiply(x);
  const Vector bx = inst.B().multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = omega[i];
    const double p = inst.phi()(x[i]);
    const double q = inst.psi()(x[i]);
    const double lhs = ax[i] + w * bx[i];
    const double rhs = std::abs(ax[i] - w * bx[i] + p - w * q) - p - w * q;
    s += (lhs - rhs) * (lhs - rhs);
  }
  return std::sqrt(s);
}

MatrixPair generate_example_4_1(std::size_t n) {
  if (n < 2) throw InvalidParameter("Example 4.1 needs n >= 2");
  return {SparseMatrix::tridiagonal(n, -1.0, 8.0, -1.0),
          SparseMatrix::tridiagonal(n, -1.0, 4.0, -1.0)};
}

MatrixPair generate_example_4_2(std::size_t m, double mu1, double mu2) {
  if (m < 2) throw InvalidParameter("Example 4.2 needs m >= 2");
  const std::size_t n = m * m;
  std::vector<Triplet> a;
  std::vector<Triplet> b;
  a.reserve(5 * n);
  b.reserve(3 * n);
  for (std::size_t blk = 0; blk < m; ++blk) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t row = blk * m + i;
      if (blk > 0) a.push_back({row, row - m, -1.0});
      if (i > 0) {
        a.push_back({row, row - 1, -1.0});
        b.push_back({row, row - 1, -1.0});
      }
      a.push_back({row, row, 8.0 + mu1});
      b.push_back({row, row, 8.0 + mu2});
      if (i + 1 < m) {
        a.push_back({row, row + 1, -1.0});
        b.push_back({row, row + 1, -1.0});
      }
      if (blk + 1 < m) a.push_back({row, row + m, -1.0});
    }
  }
  return {SparseMatrix::from_triplets(n, std::move(a)), SparseMatrix::from_triplets(n, std::move(b))};
}

}  // namespace vncp
