#pragma once

#include <span>
#include <string>
#include <string_view>

#include "vncp/linalg.hpp"

namespace vncp {

enum class NonlinearKind { Abs, Sin, Cos, Rational, Zero };

/// A scalar function applied component-wise, together with its declared
/// Lipschitz constant.
class NonlinearFn {
public:
  constexpr NonlinearFn() = default;
  constexpr explicit NonlinearFn(NonlinearKind kind) : kind_(kind) {}

  /// Looks up a catalog name: abs, sin, cos, rational, zero.
  static NonlinearFn from_name(std::string_view name);

  NonlinearKind kind() const noexcept { return kind_; }
  std::string name() const;
  /// Math-style label used in tables, e.g. "|x|" or "x/(1+x)".
  std::string label() const;
  double lipschitz() const noexcept { return kind_ == NonlinearKind::Zero ? 0.0 : 1.0; }

  /// Throws PoleError at t = -1 for Rational, NonFiniteError near the pole
  /// or for a non-finite result.
  double operator()(double t) const;
  Vector operator()(std::span<const double> x) const;

  friend bool operator==(NonlinearFn, NonlinearFn) = default;

private:
  NonlinearKind kind_ = NonlinearKind::Zero;
};

/// u(x) = A x + phi(x) >= 0, v(x) = B x + psi(x) >= 0, u^T v = 0.
class VncpInstance {
public:
  VncpInstance(SparseMatrix a, SparseMatrix b, NonlinearFn phi, NonlinearFn psi);

  const SparseMatrix& A() const noexcept { return a_; }
  const SparseMatrix& B() const noexcept { return b_; }
  NonlinearFn phi() const noexcept { return phi_; }
  NonlinearFn psi() const noexcept { return psi_; }
  std::size_t size() const noexcept { return a_.size(); }

private:
  SparseMatrix a_;
  SparseMatrix b_;
  NonlinearFn phi_;
  NonlinearFn psi_;
};

/// The pair (A, B) produced by the test-problem generators.
struct MatrixPair {
  SparseMatrix A;
  SparseMatrix B;
};

Vector eval_u(const VncpInstance& inst, std::span<const double> x);
Vector eval_v(const VncpInstance& inst, std::span<const double> x);

/// RES = |u(x)|^T |v(x)|.
double residual(const VncpInstance& inst, std::span<const double> x);

/// || (A+OB)x - ( |(A-OB)x + phi(x) - O psi(x)| - phi(x) - O psi(x) ) ||_2
double reformulation_residual(const VncpInstance& inst, const DiagonalMatrix& omega,
                              std::span<const double> x);

/// y = |(A-OB)x + phi(x) - O psi(x)|, the auxiliary variable consistent with x.
Vector modulus_term(const VncpInstance& inst, const DiagonalMatrix& omega,
                    std::span<const double> x);

/// A = tridiag(-1, 8, -1), B = tridiag(-1, 4, -1), both n x n.
MatrixPair generate_example_4_1(std::size_t n);

/// n = m^2; A = blocktridiag(-I, S, -I) + mu1 I, B = blockdiag(S) + mu2 I,
/// with S = tridiag(-1, 8, -1) of size m.
MatrixPair generate_example_4_2(std::size_t m, double mu1, double mu2);

}  // namespace vncp
