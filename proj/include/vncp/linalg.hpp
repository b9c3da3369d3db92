#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vncp {

using Vector = std::vector<double>;

/// One (row, col, value) entry, zero-based.
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square real matrix in compressed-sparse-row form.
///
/// Column indices are strictly increasing within each row and all stored
/// values are finite. Explicit zeros are allowed. The object is immutable
/// once constructed.
class SparseMatrix {
public:
  /// Takes ownership of raw CSR arrays and validates them.
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Assembles from unordered triplets; duplicates are summed.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix zero(std::size_t n);
  /// Constant-coefficient tridiagonal matrix tridiag(lower, diag, upper).
  static SparseMatrix tridiagonal(std::size_t n, double lower, double diag, double upper);
  static SparseMatrix diagonal(std::span<const double> entries);

  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;
  Vector diagonal_entries() const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector multiply(std::span<const double> x) const;
  /// y = A^T x
  Vector multiply_transpose(std::span<const double> x) const;

  bool is_diagonal() const noexcept;
  bool is_lower_triangular() const noexcept;
  std::vector<Triplet> triplets() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
  std::size_t n_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// Returns A + diag(scale) * B (scale applied row-wise to B).
SparseMatrix add_row_scaled(const SparseMatrix& a, std::span<const double> scale,
                            const SparseMatrix& b, double sign = 1.0);

/// Positive diagonal matrix, used for the modulus scaling Omega.
class DiagonalMatrix {
public:
  /// Throws InvalidParameter unless every entry is finite and strictly positive.
  explicit DiagonalMatrix(Vector entries);
  static DiagonalMatrix scalar(std::size_t n, double value);

  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const double> entries() const noexcept { return entries_; }
  double operator[](std::size_t i) const { return entries_[i]; }
  /// Spectral norm, i.e. the largest entry.
  double norm() const noexcept;

private:
  Vector entries_;
};

enum class SplittingKind { Jacobi, GaussSeidel, SOR };

struct SplittingChoice {
  SplittingKind kind = SplittingKind::Jacobi;
  double relaxation_alpha = 1.0;  // only read for SOR
};

std::string to_string(SplittingKind kind);

/// A decomposition C = M - N with M diagonal or lower triangular.
class SplittingPlan {
public:
  SplittingKind kind() const noexcept { return choice_.kind; }
  double relaxation_alpha() const noexcept { return choice_.relaxation_alpha; }
  const SparseMatrix& M() const noexcept { return m_; }
  const SparseMatrix& N() const noexcept { return n_; }
  std::size_t size() const noexcept { return m_.size(); }

private:
  friend SplittingPlan split(const SparseMatrix& c, SplittingChoice choice);
  SplittingPlan(SplittingChoice choice, SparseMatrix m, SparseMatrix n)
      : choice_(choice), m_(std::move(m)), n_(std::move(n)) {}

  SplittingChoice choice_;
  SparseMatrix m_;
  SparseMatrix n_;
};

/// Jacobi: M = D. Gauss-Seidel: M = D - L. SOR: M = D/alpha - L, N = (1/alpha - 1)D + U,
/// where C = D - L - U. Entries are copied, never subtracted.
SplittingPlan split(const SparseMatrix& c, SplittingChoice choice);

/// Solves M z = b by division or forward substitution.
Vector solve_with_M(const SplittingPlan& plan, std::span<const double> b);
/// Solves M^T z = b by division or backward substitution.
Vector solve_with_M_transpose(const SplittingPlan& plan, std::span<const double> b);

struct NormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

inline constexpr double kPowerTolerance = 1e-10;
inline constexpr std::size_t kPowerMaxIterations = 20000;

/// Largest singular value, by power iteration on A^T A.
NormEstimate spectral_norm(const SparseMatrix& a);
/// ||M^{-1}||_2 through triangular solves; exact 1/min|d_i| for diagonal M.
NormEstimate inv_norm_of_M(const SplittingPlan& plan);

SparseMatrix read_matrix_market(const std::filesystem::path& path);
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);
SparseMatrix parse_matrix_market(const std::string& text);
std::string format_matrix_market(const SparseMatrix& a);

// Dense vector helpers shared by the solvers.
Vector abs(std::span<const double> x);
double norm2(std::span<const double> x);
double distance2(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> x);

}  // namespace vncp
