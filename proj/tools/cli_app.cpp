#include "drazinkit/cli_app.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drazinkit/oracle.hpp"
#include "drazinkit/problems.hpp"
#include "drazinkit/report.hpp"

namespace drazinkit::cli {

namespace {

// Table mode runs a fixed number of cycles, so the stopping test must never
// fire; convergence is then judged against the user's eps afterwards.
constexpr double kTableModeEps = 1e-300;

struct ProblemFlags {
  std::string matrix;
  std::string example;
  std::string rhs;
  bool ones = false;
  std::string x0;
  std::string index = "";
  std::optional<std::uint64_t> similarity_seed;
  double eps = 1e-12;
  std::size_t max_cycles = 10000;
  std::string out;
  std::string plot_data;
  bool oracle_check = false;
  bool sequential = false;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& f) {
  auto* matrix = cmd.add_option("--matrix", f.matrix, "Matrix Market file holding A");
  auto* example = cmd.add_option("--example", f.example, "built-in problem ex1..ex4");
  matrix->excludes(example);
  example->excludes(matrix);
  auto* rhs = cmd.add_option("--rhs", f.rhs, "Matrix Market file holding b (n x 1)");
  auto* ones = cmd.add_flag("--ones", f.ones, "use b = (1, ..., 1)");
  rhs->excludes(ones);
  ones->excludes(rhs);
  cmd.add_option("--x0", f.x0, "initial guess file (default: zero)");
  cmd.add_option("--index", f.index,
                 "index a = ind(A), or 'auto' to compute it (default for "
                 "built-in problems: their known index)");
  cmd.add_option("--similarity-seed", f.similarity_seed,
                 "replace A by S A S^-1 with a seeded random unit lower triangular S");
  cmd.add_option("--eps", f.eps, "relative seminorm tolerance")->capture_default_str();
  cmd.add_option("--max-cycles", f.max_cycles, "restart cycle limit")->capture_default_str();
  cmd.add_option("--out", f.out, "write the convergence history CSV here");
  cmd.add_option("--plot-data", f.plot_data, "write gnuplot-ready blocks here");
  cmd.add_flag("--oracle-check", f.oracle_check,
               "cross-check the index and the Drazin axioms with the dense oracle");
  cmd.add_flag("--sequential", f.sequential, "run solvers one after another");
}

std::size_t parse_index(const std::string& text) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw UsageError("--index must be a non-negative integer or 'auto', got '" + text + "'");
  return v;
}

Problem load_problem(const ProblemFlags& f, std::ostream& out) {
  Problem p;
  if (!f.example.empty()) {
    p = generate_example(f.example);
  } else if (!f.matrix.empty()) {
    p.name = f.matrix;
    p.A = load_matrix_market(f.matrix);
    if (!p.A.square()) throw UsageError("matrix must be square");
    if (f.index.empty())
      throw UsageError("--index is required with --matrix (an integer or 'auto')");
  } else {
    throw UsageError("one of --matrix or --example is required");
  }

  const std::size_t n = p.A.rows();
  if (!f.rhs.empty()) {
    p.b = load_vector(f.rhs);
  } else if (f.ones) {
    p.b = DenseVector(n, 1.0);
  } else if (!f.matrix.empty()) {
    throw UsageError("one of --rhs or --ones is required with --matrix");
  }
  if (p.b.size() != n)
    throw UsageError("right-hand side has " + std::to_string(p.b.size()) +
                     " entries, matrix has " + std::to_string(n) + " rows");

  if (f.similarity_seed) p.A = apply_similarity(p.A, *f.similarity_seed);

  if (f.index == "auto") {
    p.index_a = oracle::index_of(p.A);
    out << "index: auto -> " << p.index_a << '\n';
  } else if (!f.index.empty()) {
    p.index_a = parse_index(f.index);
  }
  return p;
}

DenseVector initial_guess(const ProblemFlags& f, std::size_t n) {
  if (f.x0.empty()) return DenseVector(n);
  DenseVector x0 = load_vector(f.x0);
  if (x0.size() != n) throw UsageError("--x0 has the wrong length");
  return x0;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void oracle_check(const Problem& p, std::ostream& out) {
  const std::size_t computed = oracle::index_of(p.A);
  out << "oracle: index_of(A) = " << computed;
  if (computed != p.index_a) out << "  (differs from the configured a = " << p.index_a << ")";
  out << '\n';
  const auto f = oracle::drazin_inverse(p.A);
  const auto r = oracle::axiom_residuals(p.A, f.drazin, f.index_a);
  out << "oracle: axiom residuals core=" << sci(r.core) << " reflexive=" << sci(r.reflexive)
      << " commute=" << sci(r.commute) << '\n';
}

void print_summary(const RunReport& report, const std::vector<std::size_t>& checkpoints,
                   std::ostream& out) {
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  out << "problem " << report.problem << ", a = " << report.index_a << '\n';
  for (const auto& r : report.runs) {
    const auto& last = r.history.cycles.back();
    out << r.spec.label() << ": " << (r.history.converged ? "converged" : "not converged")
        << " cycles=" << last.cycle << " matvecs=" << last.matvecs
        << " relative_seminorm=" << sci(last.relative_seminorm);
    if (r.oracle_error) out << " oracle_error=" << sci(*r.oracle_error);
    if (r.stagnated) out << " stagnated";
    if (r.fallback_cycles) out << " fallback_cycles=" << r.fallback_cycles;
    out << '\n';
  }
  if (checkpoints.empty()) return;
  out << "cycles";
  for (const auto& r : report.runs) out << '\t' << r.spec.label();
  out << '\n';
  for (std::size_t c : checkpoints) {
    out << c;
    for (const auto& r : report.runs) {
      const auto v = relative_at(r.history, c);
      out << '\t' << (v ? sci(*v) : std::string("-"));
    }
    out << '\n';
  }
}

int execute(const ProblemFlags& f, const std::vector<SolverSpec>& solvers,
            std::vector<std::size_t> checkpoints, std::ostream& out) {
  const Problem p = load_problem(f, out);
  const DenseVector x0 = initial_guess(f, p.A.rows());
  if (f.oracle_check) oracle_check(p, out);

  CompareOptions opts;
  opts.eps = f.eps;
  opts.max_cycles = f.max_cycles;
  opts.concurrent = !f.sequential;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (!checkpoints.empty()) {
    opts.eps = kTableModeEps;
    opts.max_cycles = checkpoints.back();
  }

  const RunReport report = run_compare(p, x0, solvers, opts);
  print_summary(report, checkpoints, out);
  if (!f.out.empty()) export_history(report, f.out);
  if (!f.plot_data.empty()) export_plot_data(report, f.plot_data);

  bool ok = true;
  for (const auto& r : report.runs) {
    const bool reached = checkpoints.empty()
                             ? r.history.converged
                             : r.history.cycles.back().relative_seminorm < f.eps;
    ok = ok && reached;
  }
  return ok ? 0 : 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drazin-inverse solutions of singular systems by restarted DGMRES/ADGMRES"};
  app.name("drazinkit");
  app.require_subcommand(1);

  ProblemFlags flags;
  std::string method = "dgmres";
  std::size_t m = 10;
  std::size_t k = 0;
  auto* solve = app.add_subcommand("solve", "run one solver");
  add_problem_flags(*solve, flags);
  solve->add_option("--method", method, "dgmres or adgmres")
      ->check(CLI::IsMember({"dgmres", "adgmres"}))
      ->capture_default_str();
  solve->add_option("-m", m, "restart size m (> a)")->capture_default_str();
  solve->add_option("-k", k, "Ritz vectors added per cycle (adgmres)")->capture_default_str();

  std::vector<std::string> runs;
  std::vector<std::size_t> checkpoints;
  auto* compare = app.add_subcommand("compare", "run several solvers on one problem");
  add_problem_flags(*compare, flags);
  compare->add_option("--run", runs, "solver as method,m,k (repeatable)")->required();
  compare->add_option("--checkpoints", checkpoints,
                      "table mode: report relative seminorms after these cycle counts")
      ->delimiter(',');

  std::string example_id;
  std::string example_out;
  auto* example = app.add_subcommand("example", "write a built-in problem as Matrix Market");
  example->add_option("id", example_id, "ex1..ex4")->required();
  example->add_option("--out", example_out, "matrix file (default: stdout)");
  std::string example_rhs;
  example->add_option("--rhs-out", example_rhs, "write b here as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) {
      if (method == "dgmres" && k != 0) throw UsageError("-k applies to adgmres only");
      SolverSpec spec{method == "dgmres" ? Method::dgmres : Method::adgmres, m, k};
      return execute(flags, {spec}, {}, out);
    }
    if (*compare) {
      std::vector<SolverSpec> specs;
      for (const auto& r : runs) specs.push_back(parse_solver_spec(r));
      return execute(flags, specs, checkpoints, out);
    }
    const Problem p = generate_example(example_id);
    auto write = [&](const std::string& path, const DenseMatrix& mat) {
      if (path.empty()) {
        write_matrix_market(out, mat);
        return;
      }
      std::ofstream f(path);
      if (!f) throw IoError("cannot open '" + path + "' for writing");
      write_matrix_market(f, mat);
      if (!f) throw IoError("write to '" + path + "' failed");
    };
    write(example_out, p.A);
    if (!example_rhs.empty()) write(example_rhs, DenseMatrix::from_columns({&p.b, 1}, p.b.size()));
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace drazinkit::cli
