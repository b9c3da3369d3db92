// Command-line front end: solve, bounds, sweep-tau, bench.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vncp/bench.hpp"
#include "vncp/errors.hpp"

namespace {

using namespace vncp;
using namespace vncp::bench;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;

struct ProblemArgs {
  std::string example;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  double mu1 = 4.0;
  double mu2 = 4.0;
  std::string matrix_a;
  std::string matrix_b;

  void attach(CLI::App* app) {
    app->add_option("--example", example, "Built-in test problem")
        ->check(CLI::IsMember({"4.1", "4.2"}));
    app->add_option("--n", n, "Dimension (Example 4.2: a perfect square)");
    app->add_option("--m", m, "Block size of Example 4.2 (n = m^2)");
    app->add_option("--mu1", mu1, "Example 4.2 shift of A");
    app->add_option("--mu2", mu2, "Example 4.2 shift of B");
    app->add_option("--matrix-a", matrix_a, "Matrix Market file for A");
    app->add_option("--matrix-b", matrix_b, "Matrix Market file for B");
  }

  bool given() const { return !example.empty() || !matrix_a.empty() || !matrix_b.empty(); }

  ProblemSpec spec() const {
    if (!matrix_a.empty() || !matrix_b.empty()) {
      if (!example.empty()) throw InvalidParameter("use either --example or --matrix-a/--matrix-b");
      if (matrix_a.empty() || matrix_b.empty())
        throw InvalidParameter("--matrix-a and --matrix-b must be given together");
      return FileProblem{matrix_a, matrix_b};
    }
    if (example == "4.1") {
      if (!n) throw InvalidParameter("--example 4.1 requires --n");
      return Example41{*n};
    }
    if (example == "4.2") {
      std::size_t mm = 0;
      if (m) {
        mm = *m;
        if (n && *n != mm * mm) throw InvalidParameter("--n must equal m^2");
      } else if (n) {
        mm = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(*n))));
        if (mm * mm != *n) throw InvalidParameter("Example 4.2 needs --n to be a perfect square");
      } else {
        throw InvalidParameter("--example 4.2 requires --m or --n");
      }
      return Example42{mm, mu1, mu2};
    }
    throw InvalidParameter("a problem is required: --example or --matrix-a/--matrix-b");
  }
};

struct SolverArgs {
  std::string phi = "abs";
  std::string psi = "abs";
  std::string method;
  std::optional<double> tau;
  std::optional<double> sor_alpha;
  double omega_scale = 5.0;
  std::string omega_file;
  double tol = 1e-8;
  std::size_t max_iter = 1000;

  void attach(CLI::App* app, bool method_required) {
    app->add_option("--phi", phi, "phi: abs, sin, cos, rational, zero")->capture_default_str();
    app->add_option("--psi", psi, "psi: abs, sin, cos, rational, zero")->capture_default_str();
    auto* opt = app->add_option("--method", method,
                                "nmj, nmgs, nmsor, fpi-j, fpi-gs or fpi-sor");
    if (method_required) opt->required();
    app->add_option("--tau", tau, "FPI relaxation weight tau");
    app->add_option("--sor-alpha", sor_alpha, "SOR relaxation factor in (0,2)");
    app->add_option("--omega-scale", omega_scale, "Omega = scale * I")->capture_default_str();
    app->add_option("--omega-file", omega_file, "Omega diagonal, one positive real per line");
    app->add_option("--tol", tol, "RES stopping tolerance")->capture_default_str();
    app->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  }

  VncpInstance instance(const ProblemSpec& problem) const {
    MatrixPair mats = build_problem(problem);
    return VncpInstance(std::move(mats.A), std::move(mats.B), NonlinearFn::from_name(phi),
                        NonlinearFn::from_name(psi));
  }

  DiagonalMatrix omega(std::size_t n) const {
    if (!omega_file.empty()) {
      DiagonalMatrix o = read_omega_file(omega_file);
      if (o.size() != n) throw InvalidParameter("Omega file length does not match the problem");
      return o;
    }
    if (!(omega_scale > 0.0)) throw InvalidParameter("--omega-scale must be positive");
    return DiagonalMatrix::scalar(n, omega_scale);
  }

  SolverConfig config(std::size_t n) const {
    SolverConfig c;
    c.omega = omega(n);
    c.tol = tol;
    c.max_iter = max_iter;
    return c;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out);
  f << text;
}

int cmd_solve(const ProblemArgs& p, const SolverArgs& s, const std::string& out) {
  const MethodSpec method = MethodSpec::parse(s.method, s.tau, s.sor_alpha);
  const VncpInstance inst = s.instance(p.spec());
  const SolveReport rep = run_method(inst, method, s.config(inst.size()));
  emit(report_to_json(rep).dump(2) + "\n", out);
  return rep.status == SolveStatus::Converged ? kExitOk : kExitNoConvergence;
}

std::optional<std::pair<double, double>> table1_reference(const ParameterBook& book,
                                                          const ProblemSpec& problem,
                                                          const MethodSpec& method) {
  for (const auto& ref : book.tau_ranges) {
    if (ref.method != method.key()) continue;
    if (method.kind == SplittingKind::SOR && method.alpha != book.tau_range_sor_alpha) continue;
    if (std::holds_alternative<Example41>(problem) && ref.example == "4.1")
      return std::pair(ref.thm31, ref.thm32);
    if (const auto* e = std::get_if<Example42>(&problem);
        e && ref.example == "4.2" && ref.mu1 == e->mu1 && ref.mu2 == e->mu2)
      return std::pair(ref.thm31, ref.thm32);
  }
  return std::nullopt;
}

int cmd_bounds(const ProblemArgs& p, const SolverArgs& s, bool compare,
               std::optional<double> l1, std::optional<double> l2, const std::string& book_path,
               const std::string& out) {
  std::vector<BoundsRow> rows;
  const ParameterBook book =
      compare ? (book_path.empty() ? ParameterBook::load_default() : ParameterBook::load(book_path))
              : ParameterBook{};
  if (!p.given()) {
    if (!compare) throw InvalidParameter("bounds needs a problem or --compare-table1");
    rows = table1_comparison(book);
  } else {
    const ProblemSpec problem = p.spec();
    const VncpInstance inst = s.instance(problem);
    const DiagonalMatrix omega = s.omega(inst.size());
    std::vector<MethodSpec> methods;
    const double alpha = s.sor_alpha.value_or(1.05);
    if (s.method.empty()) {
      for (const char* name : {"fpi-j", "fpi-gs", "fpi-sor"}) {
        methods.push_back(MethodSpec::parse(
            name, 1.0, std::string(name) == "fpi-sor" ? std::optional(alpha) : std::nullopt));
      }
    } else {
      const MethodSpec m = MethodSpec::parse(
          s.method, s.tau.value_or(1.0),
          s.method.ends_with("sor") ? std::optional(alpha) : std::nullopt);
      methods.push_back(m);
    }
    for (const auto& m : methods) {
      BoundsRow row = compute_bounds(inst, omega, m, l1.value_or(inst.phi().lipschitz()),
                                     l2.value_or(inst.psi().lipschitz()), describe(problem));
      if (compare) {
        if (const auto ref = table1_reference(book, problem, m))
          attach_reference(row, ref->first, ref->second);
      }
      rows.push_back(std::move(row));
    }
  }
  std::cout << bounds_to_text(rows);
  if (!out.empty()) emit(bounds_to_json(rows).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_sweep(const ProblemArgs& p, const SolverArgs& s, const std::string& grid,
              const std::string& out) {
  const std::vector<double> taus = parse_tau_grid(grid);
  if (taus.size() < 2) throw InvalidParameter("--tau-grid needs at least two values");
  const MethodSpec method = MethodSpec::parse(s.method, s.tau.value_or(taus.front()), s.sor_alpha);
  const VncpInstance inst = s.instance(p.spec());
  const auto rows = sweep_tau(inst, method, taus, s.config(inst.size()));
  emit(sweep_to_csv(rows), out);
  const bool any = std::any_of(rows.begin(), rows.end(),
                               [](const SweepRow& r) { return r.status == "converged"; });
  return any ? kExitOk : kExitNoConvergence;
}

int cmd_bench(int table_id, const std::vector<std::size_t>& sizes, const SolverArgs& s,
              const std::string& book_path, const std::string& out) {
  const ParameterBook book =
      book_path.empty() ? ParameterBook::load_default() : ParameterBook::load(book_path);
  const BookTable& table = book.table(table_id);
  std::vector<std::size_t> ns = sizes;
  if (ns.empty()) ns.push_back(table.sizes.front());
  BenchOptions opts;
  opts.omega_scale = s.omega_scale;
  opts.tol = s.tol;
  opts.max_iter = s.max_iter;
  const BenchRun run = run_bench(book, table_id, ns, opts);
  if (out.empty()) {
    std::cout << run.table.to_csv();
  } else {
    emit(run.table.to_csv(), out + ".csv");
    emit(run.table.to_json().dump(2) + "\n", out + ".json");
  }
  std::size_t converged = 0;
  for (const auto& r : run.table.rows) converged += r.status == "converged";
  std::cerr << "table " << table_id << ": " << run.table.rows.size() << " cells, " << converged
            << " converged, " << run.table.mismatches(2)
            << " differ from the published IT by more than 2\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertical nonlinear complementarity solvers and benchmark harness"};
  app.require_subcommand(1);

  ProblemArgs problem;
  SolverArgs solver;
  std::string out;
  std::string book_path;

  auto* solve = app.add_subcommand("solve", "Solve one instance and print a JSON report");
  problem.attach(solve);
  solver.attach(solve, true);
  solve->add_option("--out", out, "Write the JSON report here instead of stdout");

  auto* bounds = app.add_subcommand("bounds", "Norm triple and admissible tau ranges");
  bool compare = false;
  std::optional<double> l1;
  std::optional<double> l2;
  ProblemArgs bounds_problem;
  SolverArgs bounds_solver;
  bounds_problem.attach(bounds);
  bounds_solver.attach(bounds, false);
  bounds->add_flag("--compare-table1", compare, "Show the published ranges beside the computed ones");
  bounds->add_option("--l1", l1, "Override the Lipschitz constant of phi");
  bounds->add_option("--l2", l2, "Override the Lipschitz constant of psi");
  bounds->add_option("--parameter-book", book_path, "Parameter book JSON");
  bounds->add_option("--out", out, "Also write JSON here");

  auto* sweep = app.add_subcommand("sweep-tau", "Iteration count over a tau grid (CSV)");
  std::string grid;
  ProblemArgs sweep_problem;
  SolverArgs sweep_solver;
  sweep_problem.attach(sweep);
  sweep_solver.attach(sweep, true);
  sweep->add_option("--tau-grid", grid, "start:stop:step or a comma-separated list")->required();
  sweep->add_option("--out", out, "Write CSV here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Reproduce a comparison table (CSV + JSON)");
  int table_id = 2;
  std::vector<std::size_t> sizes;
  SolverArgs bench_solver;
  bench->add_option("--table", table_id, "Table id")->required()->check(CLI::IsMember({2, 3, 4}));
  bench->add_option("--n", sizes, "Problem sizes (repeatable); defaults to the first column");
  bench->add_option("--omega-scale", bench_solver.omega_scale, "Omega = scale * I")
      ->capture_default_str();
  bench->add_option("--tol", bench_solver.tol, "RES stopping tolerance")->capture_default_str();
  bench->add_option("--max-iter", bench_solver.max_iter, "Iteration cap")->capture_default_str();
  bench->add_option("--parameter-book", book_path, "Parameter book JSON");
  bench->add_option("--out", out, "Output prefix: writes <prefix>.csv and <prefix>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) return cmd_solve(problem, solver, out);
    if (*bounds)
      return cmd_bounds(bounds_problem, bounds_solver, compare, l1, l2, book_path, out);
    if (*sweep) return cmd_sweep(sweep_problem, sweep_solver, grid, out);
    if (*bench) return cmd_bench(table_id, sizes, bench_solver, book_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
