#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vncp/analysis.hpp"
#include "vncp/model.hpp"
#include "vncp/solvers.hpp"

namespace vncp::bench {

enum class Family { FPI, NMS };

/// One solver choice: nmj, nmgs, nmsor(alpha), fpi-j(tau), fpi-gs(tau), fpi-sor(tau, alpha).
struct MethodSpec {
  Family family = Family::FPI;
  SplittingKind kind = SplittingKind::Jacobi;
  double tau = 1.0;
  double alpha = 1.0;

  /// Validates the parameter combination; missing tau/alpha throws InvalidParameter.
  static MethodSpec parse(const std::string& name, std::optional<double> tau,
                          std::optional<double> alpha);
  std::string key() const;    // e.g. "fpi-sor"
  std::string label() const;  // e.g. "FPI-SOR(tau=1.01,alpha=1.05)"
  SolverConfig config(double omega_scale, double tol, std::size_t max_iter) const;
};

SolveReport run_method(const VncpInstance& inst, const MethodSpec& method,
                       const SolverConfig& base);

struct Example41 {
  std::size_t n = 0;
};
struct Example42 {
  std::size_t m = 0;
  double mu1 = 4.0;
  double mu2 = 4.0;
};
struct FileProblem {
  std::filesystem::path a;
  std::filesystem::path b;
};
using ProblemSpec = std::variant<Example41, Example42, FileProblem>;

MatrixPair build_problem(const ProblemSpec& problem);
std::string describe(const ProblemSpec& problem);

/// Reads one positive real per line.
DiagonalMatrix read_omega_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Parameter book: the per-cell tau/alpha settings and reference iteration
// counts of the published comparison tables.

struct BookCell {
  std::string phi;
  std::string psi;
  MethodSpec method;
  std::vector<int> paper_it;  // aligned with BookTable::sizes
};

struct BookTable {
  int id = 0;
  std::string title;
  std::string example;  // "4.1" or "4.2"
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::vector<std::size_t> sizes;
  std::vector<BookCell> cells;

  ProblemSpec problem_for(std::size_t n) const;
  std::optional<std::size_t> size_index(std::size_t n) const;
};

struct TauRangeReference {
  std::string example;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::string method;
  double thm31 = 0.0;
  double thm32 = 0.0;
};

struct ParameterBook {
  std::string version;
  std::vector<BookTable> tables;
  double tau_range_sor_alpha = 1.05;
  std::size_t tau_range_n_4_1 = 1000;
  std::size_t tau_range_m_4_2 = 40;
  std::vector<TauRangeReference> tau_ranges;

  static ParameterBook from_json(const nlohmann::json& j);
  static ParameterBook load(const std::filesystem::path& path);
  /// The book shipped in data/parameter_book.json.
  static ParameterBook load_default();

  const BookTable& table(int id) const;
};

std::filesystem::path default_parameter_book_path();

// ---------------------------------------------------------------------------
// Result tables.

struct ResultRow {
  int table = 0;
  std::string phi;
  std::string psi;
  std::string method;  // key
  std::string label;
  std::size_t n = 0;
  std::optional<double> tau;
  std::optional<double> alpha;
  std::size_t it = 0;
  double time_s = 0.0;
  std::string status;
  double final_res = 0.0;
  double reformulation_res = 0.0;
  double min_u = 0.0;
  double min_v = 0.0;
  std::optional<int> paper_it;
  std::optional<int> delta_it;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::string artifact_version;
  std::string book_version;
  std::string machine_note;

  std::string to_csv() const;
  static ResultTable from_csv(const std::string& text);
  nlohmann::json to_json() const;
  /// Rows with |delta_it| > threshold.
  std::size_t mismatches(int threshold = 2) const;
};

struct BenchRun {
  ResultTable table;
  /// Solve reports in row order, including residual histories.
  std::vector<SolveReport> reports;
};

struct BenchOptions {
  double omega_scale = 5.0;
  double tol = 1e-8;
  std::size_t max_iter = 1000;
};

BenchRun run_bench(const ParameterBook& book, int table_id, const std::vector<std::size_t>& sizes,
                   const BenchOptions& options = {});

// ---------------------------------------------------------------------------
// tau sweep.

struct SweepRow {
  double tau = 0.0;
  std::size_t it = 0;
  std::string status;
  double final_res = 0.0;
};

/// One FPI run per tau; Diverged and failed rows report it = max_iter.
std::vector<SweepRow> sweep_tau(const VncpInstance& inst, const MethodSpec& method,
                                const std::vector<double>& taus, const SolverConfig& base);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// Parses "start:stop:step" or a comma-separated list.
std::vector<double> parse_tau_grid(const std::string& text);

// ---------------------------------------------------------------------------
// Convergence bounds.

struct BoundsRow {
  std::string problem;
  std::string method;
  NormTriple triple;
  TauRange range;
  std::optional<double> reference_thm31;
  std::optional<double> reference_thm32;
  std::optional<bool> match_thm31;
  std::optional<bool> match_thm32;
};

inline constexpr double kTableMatchTolerance = 0.05;

BoundsRow compute_bounds(const VncpInstance& inst, const DiagonalMatrix& omega,
                         const MethodSpec& method, double L1, double L2,
                         const std::string& problem_name);
/// Attaches the published reference and match flags at 5 % relative tolerance.
void attach_reference(BoundsRow& row, double thm31, double thm32);
/// All nine published rows recomputed with Omega = 5I and L1 = L2 = 1.
std::vector<BoundsRow> table1_comparison(const ParameterBook& book);
std::string bounds_to_text(const std::vector<BoundsRow>& rows);
nlohmann::json bounds_to_json(const std::vector<BoundsRow>& rows);

nlohmann::json report_to_json(const SolveReport& report);

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace vncp::bench
