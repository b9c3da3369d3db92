#include "vncp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <type_traits>

#include "vncp/errors.hpp"

#ifndef VNCP_DEFAULT_BOOK
#define VNCP_DEFAULT_BOOK "data/parameter_book.json"
#endif

namespace vncp::bench {

using nlohmann::json;

namespace {

std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON has no NaN or infinity; those become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

MethodSpec MethodSpec::parse(const std::string& name, std::optional<double> tau,
                             std::optional<double> alpha) {
  MethodSpec m;
  if (name == "nmj" || name == "fpi-j") {
    m.kind = SplittingKind::Jacobi;
  } else if (name == "nmgs" || name == "fpi-gs") {
    m.kind = SplittingKind::GaussSeidel;
  } else if (name == "nmsor" || name == "fpi-sor") {
    m.kind = SplittingKind::SOR;
  } else {
    throw InvalidParameter("unknown method '" + name +
                           "' (expected nmj, nmgs, nmsor, fpi-j, fpi-gs or fpi-sor)");
  }
  m.family = name.rfind("fpi-", 0) == 0 ? Family::FPI : Family::NMS;
  if (m.family == Family::FPI) {
    if (!tau) throw InvalidParameter("method " + name + " requires --tau");
    if (!(*tau > 0.0)) throw InvalidParameter("tau must be positive");
    m.tau = *tau;
  } else if (tau) {
    throw InvalidParameter("method " + name + " takes no tau");
  }
  if (m.kind == SplittingKind::SOR) {
    if (!alpha) throw InvalidParameter("method " + name + " requires --sor-alpha");
    if (!(*alpha > 0.0 && *alpha < 2.0))
      throw InvalidParameter("SOR relaxation factor must lie in (0, 2)");
    m.alpha = *alpha;
  } else if (alpha) {
    throw InvalidParameter("method " + name + " takes no SOR relaxation factor");
  }
  return m;
}

std::string MethodSpec::key() const {
  const char* kind_key = kind == SplittingKind::Jacobi        ? "j"
                         : kind == SplittingKind::GaussSeidel ? "gs"
                                                              : "sor";
  return family == Family::FPI ? std::string("fpi-") + kind_key : std::string("nm") + kind_key;
}

SolverConfig MethodSpec::config(double omega_scale, double tol, std::size_t max_iter) const {
  SolverConfig c;
  c.tau = tau;
  c.splitting = {kind, kind == SplittingKind::SOR ? alpha : 1.0};
  c.omega_scale = omega_scale;
  c.tol = tol;
  c.max_iter = max_iter;
  return c;
}

std::string MethodSpec::label() const {
  const SolverConfig c = config(5.0, 1e-8, 1);
  return family == Family::FPI ? fpi_label(c) : nms_label(c);
}

SolveReport run_method(const VncpInstance& inst, const MethodSpec& method,
                       const SolverConfig& base) {
  SolverConfig c = base;
  c.tau = method.tau;
  c.splitting = {method.kind, method.kind == SplittingKind::SOR ? method.alpha : 1.0};
  return method.family == Family::FPI ? fpi_solve(inst, c) : nms_solve(inst, c);
}

MatrixPair build_problem(const ProblemSpec& problem) {
  return std::visit(
      [](const auto& p) -> MatrixPair {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example41>) {
          return generate_example_4_1(p.n);
        } else if constexpr (std::is_same_v<T, Example42>) {
          return generate_example_4_2(p.m, p.mu1, p.mu2);
        } else {
          SparseMatrix a = read_matrix_market(p.a);
          SparseMatrix b = read_matrix_market(p.b);
          if (a.size() != b.size()) throw InvalidParameter("A and B files differ in dimension");
          return {std::move(a), std::move(b)};
        }
      },
      problem);
}

std::string describe(const ProblemSpec& problem) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Example41>) {
          return "example-4.1(n=" + std::to_string(p.n) + ")";
        } else if constexpr (std::is_same_v<T, Example42>) {
          return "example-4.2(m=" + std::to_string(p.m) + ",mu1=" + format_number(p.mu1) +
                 ",mu2=" + format_number(p.mu2) + ")";
        } else {
          return "files(" + p.a.string() + "," + p.b.string() + ")";
        }
      },
      problem);
}

DiagonalMatrix read_omega_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Vector entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream s(line);
    double v = 0.0;
    std::string extra;
    if (!(s >> v) || (s >> extra)) throw ParseError("expected one real per line", line_no);
    entries.push_back(v);
  }
  return DiagonalMatrix(std::move(entries));
}

// ---------------------------------------------------------------------------

ProblemSpec BookTable::problem_for(std::size_t n) const {
  if (example == "4.1") return Example41{n};
  const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (m * m != n) throw InvalidParameter("Example 4.2 sizes must be perfect squares");
  return Example42{m, mu1, mu2};
}

std::optional<std::size_t> BookTable::size_index(std::size_t n) const {
  const auto it = std::find(sizes.begin(), sizes.end(), n);
  if (it == sizes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - sizes.begin());
}

namespace {

void read_problem(const json& p, std::string& example, double& mu1, double& mu2) {
  example = p.at("example").get<std::string>();
  if (example != "4.1" && example != "4.2")
    throw InvalidParameter("parameter book: unknown example '" + example + "'");
  mu1 = p.value("mu1", 0.0);
  mu2 = p.value("mu2", 0.0);
}

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

ParameterBook ParameterBook::from_json(const json& j) {
  ParameterBook book;
  try {
    book.version = j.at("version").get<std::string>();
    for (const auto& t : j.at("tables")) {
      BookTable table;
      table.id = t.at("id").get<int>();
      table.title = t.value("title", "");
      read_problem(t.at("problem"), table.example, table.mu1, table.mu2);
      table.sizes = t.at("sizes").get<std::vector<std::size_t>>();
      for (const auto& c : t.at("cells")) {
        BookCell cell;
        cell.phi = c.at("phi").get<std::string>();
        cell.psi = c.at("psi").get<std::string>();
        NonlinearFn::from_name(cell.phi);
        NonlinearFn::from_name(cell.psi);
        cell.method = MethodSpec::parse(c.at("method").get<std::string>(), opt_number(c, "tau"),
                                        opt_number(c, "alpha"));
        cell.paper_it = c.at("paper_it").get<std::vector<int>>();
        if (cell.paper_it.size() != table.sizes.size())
          throw InvalidParameter("parameter book: paper_it length differs from sizes");
        table.cells.push_back(std::move(cell));
      }
      book.tables.push_back(std::move(table));
    }
    const auto& tr = j.at("tau_ranges");
    book.tau_range_sor_alpha = tr.at("sor_alpha").get<double>();
    book.tau_range_n_4_1 = tr.at("n_example_4_1").get<std::size_t>();
    book.tau_range_m_4_2 = tr.at("m_example_4_2").get<std::size_t>();
    for (const auto& r : tr.at("rows")) {
      TauRangeReference ref;
      read_problem(r.at("problem"), ref.example, ref.mu1, ref.mu2);
      ref.method = r.at("method").get<std::string>();
      ref.thm31 = r.at("thm31").get<double>();
      ref.thm32 = r.at("thm32").get<double>();
      book.tau_ranges.push_back(ref);
    }
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed parameter book: ") + e.what());
  }
  return book;
}

ParameterBook ParameterBook::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open parameter book " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidParameter("parameter book " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::filesystem::path default_parameter_book_path() { return VNCP_DEFAULT_BOOK; }

ParameterBook ParameterBook::load_default() { return load(default_parameter_book_path()); }

const BookTable& ParameterBook::table(int id) const {
  for (const auto& t : tables)
    if (t.id == id) return t;
  throw InvalidParameter("no table " + std::to_string(id) + " in the parameter book");
}

// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kColumns = {
    "table", "phi",    "psi",       "method",            "label", "n",     "tau",
    "alpha", "it",     "time_s",    "status",            "final_res",
    "reformulation_res", "min_u", "min_v", "paper_it", "delta_it"};

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field", records.size() + 1);
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

double to_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("bad number '" + s + "'", line);
  return v;
}

long long to_int(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("bad integer '" + s + "'", line);
  return v;
}

template <class T>
std::string opt_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return exact(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& r : rows) {
    const std::vector<std::string> f = {std::to_string(r.table),
                                        r.phi,
                                        r.psi,
                                        r.method,
                                        r.label,
                                        std::to_string(r.n),
                                        opt_field(r.tau),
                                        opt_field(r.alpha),
                                        std::to_string(r.it),
                                        exact(r.time_s),
                                        r.status,
                                        exact(r.final_res),
                                        exact(r.reformulation_res),
                                        exact(r.min_u),
                                        exact(r.min_v),
                                        opt_field(r.paper_it),
                                        opt_field(r.delta_it)};
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << quote(f[i]);
    out << '\n';
  }
  return out.str();
}

ResultTable ResultTable::from_csv(const std::string& text) {
  const auto records = parse_csv_records(text);
  if (records.empty() || records.front() != kColumns)
    throw ParseError("unexpected CSV header", 1);
  ResultTable table;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& f = records[k];
    const std::size_t line = k + 1;
    if (f.size() != kColumns.size()) throw ParseError("wrong number of CSV fields", line);
    ResultRow r;
    r.table = static_cast<int>(to_int(f[0], line));
    r.phi = f[1];
    r.psi = f[2];
    r.method = f[3];
    r.label = f[4];
    r.n = static_cast<std::size_t>(to_int(f[5], line));
    if (!f[6].empty()) r.tau = to_double(f[6], line);
    if (!f[7].empty()) r.alpha = to_double(f[7], line);
    r.it = static_cast<std::size_t>(to_int(f[8], line));
    r.time_s = to_double(f[9], line);
    r.status = f[10];
    r.final_res = to_double(f[11], line);
    r.reformulation_res = to_double(f[12], line);
    r.min_u = to_double(f[13], line);
    r.min_v = to_double(f[14], line);
    if (!f[15].empty()) r.paper_it = static_cast<int>(to_int(f[15], line));
    if (!f[16].empty()) r.delta_it = static_cast<int>(to_int(f[16], line));
    table.rows.push_back(std::move(r));
  }
  return table;
}

json ResultTable::to_json() const {
  json j;
  j["metadata"] = {{"artifact_version", artifact_version},
                   {"parameter_book_version", book_version},
                   {"machine_note", machine_note}};
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row = {{"table", r.table},
                {"phi", r.phi},
                {"psi", r.psi},
                {"method", r.method},
                {"label", r.label},
                {"n", r.n},
                {"it", r.it},
                {"time_s", r.time_s},
                {"status", r.status},
                {"final_res", finite_or_null(r.final_res)},
                {"reformulation_res", finite_or_null(r.reformulation_res)},
                {"min_u", finite_or_null(r.min_u)},
                {"min_v", finite_or_null(r.min_v)}};
    row["tau"] = r.tau ? json(*r.tau) : json(nullptr);
    row["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
    row["paper_it"] = r.paper_it ? json(*r.paper_it) : json(nullptr);
    row["delta_it"] = r.delta_it ? json(*r.delta_it) : json(nullptr);
    j["rows"].push_back(std::move(row));
  }
  j["mismatches_over_2"] = mismatches(2);
  return j;
}

std::size_t ResultTable::mismatches(int threshold) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const ResultRow& r) {
    return r.delta_it && std::abs(*r.delta_it) > threshold;
  }));
}

BenchRun run_bench(const ParameterBook& book, int table_id, const std::vector<std::size_t>& sizes,
                   const BenchOptions& options) {
  const BookTable& table = book.table(table_id);
  if (sizes.empty()) throw InvalidParameter("at least one size is required");
  BenchRun run;
  run.table.artifact_version = kArtifactVersion;
  run.table.book_version = book.version;
  run.table.machine_note = "wall times cover the iteration loop only and are hardware dependent";

  for (std::size_t n : sizes) {
    const MatrixPair mats = build_problem(table.problem_for(n));
    const auto col = table.size_index(n);
    for (const auto& cell : table.cells) {
      const VncpInstance inst(mats.A, mats.B, NonlinearFn::from_name(cell.phi),
                              NonlinearFn::from_name(cell.psi));
      const SolverConfig cfg = cell.method.config(options.omega_scale, options.tol, options.max_iter);
      SolveReport rep = run_method(inst, cell.method, cfg);

      ResultRow row;
      row.table = table_id;
      row.phi = cell.phi;
      row.psi = cell.psi;
      row.method = cell.method.key();
      row.label = cell.method.label();
      row.n = inst.size();
      if (cell.method.family == Family::FPI) row.tau = cell.method.tau;
      if (cell.method.kind == SplittingKind::SOR) row.alpha = cell.method.alpha;
      row.it = rep.iterations;
      row.time_s = rep.wall_time;
      row.status = to_string(rep.status);
      row.final_res = rep.final_residual();
      row.min_u = rep.min_u;
      row.min_v = rep.min_v;
      try {
        row.reformulation_res = reformulation_residual(
            inst, DiagonalMatrix::scalar(inst.size(), options.omega_scale), rep.x_final);
      } catch (const Error&) {
        row.reformulation_res = std::numeric_limits<double>::quiet_NaN();
      }
      if (col) {
        row.paper_it = cell.paper_it[*col];
        row.delta_it = static_cast<int>(rep.iterations) - *row.paper_it;
      }
      run.table.rows.push_back(std::move(row));
      run.reports.push_back(std::move(rep));
    }
  }
  return run;
}

// ---------------------------------------------------------------------------

std::vector<SweepRow> sweep_tau(const VncpInstance& inst, const MethodSpec& method,
                                const std::vector<double>& taus, const SolverConfig& base) {
  if (method.family != Family::FPI) throw InvalidParameter("tau sweeps need an FPI method");
  if (taus.size() < 2) throw InvalidParameter("a tau sweep needs at least two grid points");
  std::vector<SweepRow> rows;
  rows.reserve(taus.size());
  for (double tau : taus) {
    MethodSpec m = method;
    m.tau = tau;
    SweepRow row;
    row.tau = tau;
    try {
      const SolveReport rep = run_method(inst, m, base);
      row.status = to_string(rep.status);
      row.it = rep.status == SolveStatus::Converged ? rep.iterations : base.max_iter;
      row.final_res = rep.final_residual();
    } catch (const Error&) {
      row.status = "error";
      row.it = base.max_iter;
      row.final_res = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "tau,it,status,final_res\n";
  for (const auto& r : rows)
    out << exact(r.tau) << ',' << r.it << ',' << r.status << ',' << exact(r.final_res) << '\n';
  return out.str();
}

std::vector<double> parse_tau_grid(const std::string& text) {
  std::vector<double> taus;
  auto num = [](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw InvalidParameter("bad tau grid value '" + s + "'");
    return v;
  };
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    const double start = num(text.substr(0, p1));
    const double stop = num(text.substr(p1 + 1, p2 - p1 - 1));
    const double step = num(text.substr(p2 + 1));
    if (!(step > 0.0) || stop < start) throw InvalidParameter("tau grid needs start <= stop, step > 0");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) taus.push_back(start + static_cast<double>(i) * step);
  } else {
    std::istringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) taus.push_back(num(item));
  }
  for (double t : taus)
    if (!(t > 0.0)) throw InvalidParameter("tau values must be positive");
  return taus;
}

// ---------------------------------------------------------------------------

BoundsRow compute_bounds(const VncpInstance& inst, const DiagonalMatrix& omega,
                         const MethodSpec& method, double L1, double L2,
                         const std::string& problem_name) {
  const SparseMatrix c = add_row_scaled(inst.A(), omega.entries(), inst.B());
  const SplittingPlan plan =
      split(c, {method.kind, method.kind == SplittingKind::SOR ? method.alpha : 1.0});
  BoundsRow row;
  row.problem = problem_name;
  switch (method.kind) {
    case SplittingKind::Jacobi: row.method = "FPI-J"; break;
    case SplittingKind::GaussSeidel: row.method = "FPI-GS"; break;
    case SplittingKind::SOR: row.method = "FPI-SOR(alpha=" + format_number(method.alpha) + ")"; break;
  }
  row.triple = compute_norm_triple(inst, omega, plan, L1, L2);
  row.range = tau_range(row.triple);
  return row;
}

void attach_reference(BoundsRow& row, double thm31, double thm32) {
  row.reference_thm31 = thm31;
  row.reference_thm32 = thm32;
  row.match_thm31 = std::abs(row.range.upper_thm31 - thm31) <= kTableMatchTolerance * thm31;
  row.match_thm32 = std::abs(row.range.upper_thm32 - thm32) <= kTableMatchTolerance * thm32;
}

std::vector<BoundsRow> table1_comparison(const ParameterBook& book) {
  std::vector<BoundsRow> rows;
  for (const auto& ref : book.tau_ranges) {
    ProblemSpec problem = ref.example == "4.1"
                              ? ProblemSpec(Example41{book.tau_range_n_4_1})
                              : ProblemSpec(Example42{book.tau_range_m_4_2, ref.mu1, ref.mu2});
    const MatrixPair mats = build_problem(problem);
    const VncpInstance inst(mats.A, mats.B, NonlinearFn(NonlinearKind::Abs),
                            NonlinearFn(NonlinearKind::Abs));
    const MethodSpec method = MethodSpec::parse(
        ref.method, 1.0,
        ref.method == "fpi-sor" ? std::optional<double>(book.tau_range_sor_alpha) : std::nullopt);
    BoundsRow row = compute_bounds(inst, DiagonalMatrix::scalar(inst.size(), 5.0), method, 1.0,
                                   1.0, describe(problem));
    attach_reference(row, ref.thm31, ref.thm32);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bounds_to_text(const std::vector<BoundsRow>& rows) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    out << r.problem << "  " << r.method << '\n';
    out << "  alpha=" << r.triple.alpha_norm << "  beta=" << r.triple.beta
        << "  gamma=" << r.triple.gamma << "  alpha*(beta+gamma)="
        << r.triple.alpha_norm * (r.triple.beta + r.triple.gamma)
        << "  feasible=" << (r.range.feasible ? "yes" : "no") << '\n';
    out << "  upper_thm31: (0, " << r.range.upper_thm31 << ")";
    if (r.reference_thm31) {
      out << "  reference (0, " << *r.reference_thm31 << ")  "
          << (*r.match_thm31 ? "MATCH" : "MISMATCH");
    }
    out << '\n';
    out << "  upper_thm32: (0, " << r.range.upper_thm32 << ")";
    if (r.reference_thm32) {
      out << "  reference (0, " << *r.reference_thm32 << ")  "
          << (*r.match_thm32 ? "MATCH" : "MISMATCH");
    }
    out << '\n';
    if (!r.range.feasible) out << "  note: alpha*(beta+gamma) >= 1, ranges carry no guarantee\n";
    for (const auto& w : r.triple.warnings) out << "  warning: " << w << '\n';
  }
  return out.str();
}

json bounds_to_json(const std::vector<BoundsRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"problem", r.problem},
              {"method", r.method},
              {"alpha", r.triple.alpha_norm},
              {"beta", r.triple.beta},
              {"gamma", r.triple.gamma},
              {"norm_N", r.triple.norm_N},
              {"norm_A_minus_omega_B", r.triple.norm_A_minus_omega_B},
              {"omega_norm", r.triple.omega_norm},
              {"L1", r.triple.L1},
              {"L2", r.triple.L2},
              {"feasible", r.range.feasible},
              {"upper_thm31", r.range.upper_thm31},
              {"upper_thm32", r.range.upper_thm32},
              {"warnings", r.triple.warnings}};
    if (r.reference_thm31) {
      j["reference_thm31"] = *r.reference_thm31;
      j["reference_thm32"] = *r.reference_thm32;
      j["match_thm31"] = *r.match_thm31;
      j["match_thm32"] = *r.match_thm32;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

json report_to_json(const SolveReport& report) {
  json hist = json::array();
  for (double r : report.residual_history) hist.push_back(finite_or_null(r));
  json x = json::array();
  for (double v : report.x_final) x.push_back(finite_or_null(v));
  json j = {{"method", report.method_label},
            {"status", to_string(report.status)},
            {"iterations", report.iterations},
            {"residual_history", std::move(hist)},
            {"final_residual", finite_or_null(report.final_residual())},
            {"wall_time_s", report.wall_time},
            {"min_u", finite_or_null(report.min_u)},
            {"min_v", finite_or_null(report.min_v)},
            {"x_final", std::move(x)}};
  if (!report.message.empty()) j["message"] = report.message;
  return j;
}

}  // namespace vncp::bench
