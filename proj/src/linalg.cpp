#include "vncp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "vncp/errors.hpp"

namespace vncp {

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (n_ == 0) throw InvalidParameter("matrix dimension must be at least 1");
  if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0)
    throw InvalidParameter("row_offsets must have n+1 entries starting at 0");
  if (col_indices_.size() != values_.size() || row_offsets_.back() != values_.size())
    throw InvalidParameter("CSR array lengths disagree");
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i])
      throw InvalidParameter("row_offsets must be nondecreasing");
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= n_) throw InvalidParameter("column index out of range");
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
        throw InvalidParameter("column indices must be strictly increasing within a row");
      if (!std::isfinite(values_[k])) throw InvalidParameter("matrix values must be finite");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n) throw InvalidParameter("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && t.row == entries[k - 1].row && t.col == entries[k - 1].col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  return diagonal(Vector(n, 1.0));
}

SparseMatrix SparseMatrix::zero(std::size_t n) {
  return SparseMatrix(n, std::vector<std::size_t>(n + 1, 0), {}, {});
}

SparseMatrix SparseMatrix::tridiagonal(std::size_t n, double lower, double diag, double upper) {
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t.push_back({i, i - 1, lower});
    t.push_back({i, i, diag});
    if (i + 1 < n) t.push_back({i, i + 1, upper});
  }
  return from_triplets(n, std::move(t));
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> entries) {
  const std::size_t n = entries.size();
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i + 1] = i + 1;
    cols[i] = i;
  }
  return SparseMatrix(n, std::move(offsets), std::move(cols),
                      Vector(entries.begin(), entries.end()));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

Vector SparseMatrix::diagonal_entries() const {
  Vector d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw InvalidParameter("dimension mismatch in multiply");
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      sum += values_[k] * x[col_indices_[k]];
    y[i] = sum;
  }
}

Vector SparseMatrix::multiply(std::span<const double> x) const {
  Vector y(n_);
  multiply(x, y);
  return y;
}

Vector SparseMatrix::multiply_transpose(std::span<const double> x) const {
  if (x.size() != n_) throw InvalidParameter("dimension mismatch in multiply_transpose");
  Vector y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      y[col_indices_[k]] += values_[k] * x[i];
  }
  return y;
}

bool SparseMatrix::is_diagonal() const noexcept {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      if (col_indices_[k] != i) return false;
  }
  return true;
}

bool SparseMatrix::is_lower_triangular() const noexcept {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      if (col_indices_[k] > i) return false;
  }
  return true;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      out.push_back({i, col_indices_[k], values_[k]});
  }
  return out;
}

SparseMatrix add_row_scaled(const SparseMatrix& a, std::span<const double> scale,
                            const SparseMatrix& b, double sign) {
  if (a.size() != b.size() || scale.size() != a.size())
    throw InvalidParameter("dimension mismatch in add_row_scaled");
  std::vector<Triplet> t = a.triplets();
  for (const auto& e : b.triplets()) t.push_back({e.row, e.col, sign * scale[e.row] * e.value});
  return SparseMatrix::from_triplets(a.size(), std::move(t));
}

DiagonalMatrix::DiagonalMatrix(Vector entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidParameter("diagonal matrix must be nonempty");
  for (double d : entries_) {
    if (!std::isfinite(d) || d <= 0.0)
      throw InvalidParameter("Omega entries must be finite and strictly positive");
  }
}

DiagonalMatrix DiagonalMatrix::scalar(std::size_t n, double value) {
  return DiagonalMatrix(Vector(n, value));
}

double DiagonalMatrix::norm() const noexcept {
  return *std::max_element(entries_.begin(), entries_.end());
}

std::string to_string(SplittingKind kind) {
  switch (kind) {
    case SplittingKind::Jacobi: return "jacobi";
    case SplittingKind::GaussSeidel: return "gauss-seidel";
    case SplittingKind::SOR: return "sor";
  }
  return "unknown";
}

SplittingPlan split(const SparseMatrix& c, SplittingChoice choice) {
  const std::size_t n = c.size();
  const double alpha = choice.relaxation_alpha;
  if (choice.kind == SplittingKind::SOR && !(alpha > 0.0 && alpha < 2.0))
    throw InvalidParameter("SOR relaxation factor must lie in (0, 2)");
  if (choice.kind != SplittingKind::SOR) choice.relaxation_alpha = 1.0;

  std::vector<Triplet> m;
  std::vector<Triplet> nn;
  m.reserve(c.nnz());
  nn.reserve(c.nnz());
  std::vector<bool> has_diag(n, false);
  for (const auto& e : c.triplets()) {
    if (e.row == e.col) {
      if (e.value == 0.0) continue;
      has_diag[e.row] = true;
      if (choice.kind == SplittingKind::SOR) {
        const double md = e.value / alpha;
        m.push_back({e.row, e.col, md});
        // N_ii = M_ii - C_ii keeps M - N = C exact when 1/alpha in [1/2, 2].
        const double nd = md - e.value;
        if (nd != 0.0) nn.push_back({e.row, e.col, nd});
      } else {
        m.push_back(e);
      }
    } else if (e.col < e.row && choice.kind != SplittingKind::Jacobi) {
      m.push_back(e);
    } else {
      nn.push_back({e.row, e.col, -e.value});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_diag[i])
      throw SingularSplitting("zero diagonal entry at row " + std::to_string(i));
  }
  return SplittingPlan(choice, SparseMatrix::from_triplets(n, std::move(m)),
                       SparseMatrix::from_triplets(n, std::move(nn)));
}

Vector solve_with_M(const SplittingPlan& plan, std::span<const double> b) {
  const SparseMatrix& m = plan.M();
  const std::size_t n = m.size();
  if (b.size() != n) throw InvalidParameter("dimension mismatch in solve_with_M");
  const auto rows = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  Vector z(n);
  // Rows are sorted by column, so the diagonal is the last entry of each row.
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    const std::size_t last = rows[i + 1] - 1;
    for (std::size_t k = rows[i]; k < last; ++k) sum -= vals[k] * z[cols[k]];
    z[i] = sum / vals[last];
  }
  return z;
}

Vector solve_with_M_transpose(const SplittingPlan& plan, std::span<const double> b) {
  const SparseMatrix& m = plan.M();
  const std::size_t n = m.size();
  if (b.size() != n) throw InvalidParameter("dimension mismatch in solve_with_M_transpose");
  const auto rows = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  Vector work(b.begin(), b.end());
  Vector z(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t last = rows[i + 1] - 1;
    z[i] = work[i] / vals[last];
    for (std::size_t k = rows[i]; k < last; ++k) work[cols[k]] -= vals[k] * z[i];
  }
  return z;
}

namespace {

Vector power_start(std::size_t n) {
  Vector v(n);
  for (std::size_t j = 0; j < n; ++j)
    v[j] = 1.0 + static_cast<double>(j + 1) / static_cast<double>(n);
  const double s = norm2(v);
  for (double& x : v) x /= s;
  return v;
}

/// Power iteration for the largest singular value of an operator given
/// through `apply` (v -> Kv) and `apply_t` (v -> K^T v).
template <class Apply, class ApplyT>
NormEstimate power_singular(std::size_t n, Apply apply, ApplyT apply_t) {
  Vector v = power_start(n);
  NormEstimate est;
  est.converged = false;
  double previous = 0.0;
  for (std::size_t it = 1; it <= kPowerMaxIterations; ++it) {
    const Vector kv = apply(v);
    const double sigma = norm2(kv);
    est.value = sigma;
    est.iterations = it;
    if (sigma == 0.0) {
      est.converged = true;
      break;
    }
    if (it > 1 && std::abs(sigma - previous) <= kPowerTolerance * sigma) {
      est.converged = true;
      break;
    }
    previous = sigma;
    Vector w = apply_t(kv);
    const double wn = norm2(w);
    if (wn == 0.0) {
      est.converged = true;
      break;
    }
    for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
  }
  return est;
}

}  // namespace

NormEstimate spectral_norm(const SparseMatrix& a) {
  if (a.is_diagonal()) {
    double m = 0.0;
    for (double d : a.values()) m = std::max(m, std::abs(d));
    return {m, 0, true};
  }
  return power_singular(
      a.size(), [&](const Vector& v) { return a.multiply(v); },
      [&](const Vector& v) { return a.multiply_transpose(v); });
}

NormEstimate inv_norm_of_M(const SplittingPlan& plan) {
  const SparseMatrix& m = plan.M();
  if (m.is_diagonal()) {
    double lo = std::numeric_limits<double>::infinity();
    for (double d : m.values()) lo = std::min(lo, std::abs(d));
    return {1.0 / lo, 0, true};
  }
  return power_singular(
      m.size(), [&](const Vector& v) { return solve_with_M(plan, v); },
      [&](const Vector& v) { return solve_with_M_transpose(plan, v); });
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SparseMatrix parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file", 1);
  ++line_no;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", line_no);
  if (format != "coordinate") throw ParseError("only coordinate format is supported", line_no);
  if (field == "complex") throw ParseError("complex matrices are not supported", line_no);
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError("unsupported field '" + field + "'", line_no);
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
  const bool symmetric = symmetry == "symmetric";

  // Skip comments and blank lines up to the size line.
  bool have_size = false;
  std::size_t rows = 0, cols = 0, entries = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size_line(line);
    std::string extra;
    if (!(size_line >> rows >> cols >> entries) || (size_line >> extra))
      throw ParseError("malformed size line", line_no);
    have_size = true;
    break;
  }
  if (!have_size) throw ParseError("missing size line", line_no);
  if (rows != cols) {
    throw ParseError("matrix must be square, got " + std::to_string(rows) + "x" +
                         std::to_string(cols),
                     line_no);
  }
  if (rows == 0) throw ParseError("matrix dimension must be at least 1", line_no);

  std::vector<Triplet> t;
  t.reserve(symmetric ? 2 * entries : entries);
  std::size_t read = 0;
  while (read < entries && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(entry >> i >> j >> v) || (entry >> extra))
      throw ParseError("malformed entry", line_no);
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows ||
        static_cast<std::size_t>(j) > cols)
      throw ParseError("index out of range", line_no);
    if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    if (symmetric && c > r) throw ParseError("symmetric file stores upper-triangle entry", line_no);
    t.push_back({r, c, v});
    if (symmetric && r != c) t.push_back({c, r, v});
    ++read;
  }
  if (read != entries) {
    throw ParseError("expected " + std::to_string(entries) + " entries, found " +
                         std::to_string(read),
                     line_no);
  }
  return SparseMatrix::from_triplets(rows, std::move(t));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_market(ss.str());
}

std::string format_matrix_market(const SparseMatrix& a) {
  std::ostringstream out;
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.size() << ' ' << a.size() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (const auto& e : a.triplets()) out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
  return out.str();
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << format_matrix_market(a);
}

Vector abs(std::span<const double> x) {
  Vector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::abs(v); });
  return out;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidParameter("dimension mismatch in distance2");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace vncp
