#include "drazinkit/report.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>

#include "drazinkit/oracle.hpp"

namespace drazinkit::cli {

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  std::size_t used = 0;
  try {
    value = std::stoul(std::string(text), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

SolverOutcome run_one(const Problem& problem, const DenseVector& x0,
                      const SolverSpec& spec, const CompareOptions& opts) {
  SolverConfig cfg = opts.base;
  cfg.index_a = problem.index_a;
  cfg.restart_m = spec.m;
  cfg.tol_eps = opts.eps;
  cfg.max_cycles = opts.max_cycles;

  SolverOutcome out;
  out.spec = spec;
  out.history = spec.method == Method::dgmres
                    ? dgmres_restarted(problem.A, problem.b, x0, cfg)
                    : adgmres_restarted(problem.A, problem.b, x0, spec.k, cfg);
  if (out.history.converged) out.cycles_to_tolerance = out.history.cycles.back().cycle;
  out.stagnated = detect_stagnation(out.history);
  for (const auto& rec : out.history.cycles) out.fallback_cycles += rec.fallback;
  return out;
}

}  // namespace

std::string SolverSpec::label() const {
  if (method == Method::dgmres) return "dgmres_m" + std::to_string(m);
  return "adgmres_m" + std::to_string(m) + "_k" + std::to_string(k);
}

SolverSpec parse_solver_spec(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2 || parts.size() > 3)
    throw UsageError("solver spec '" + std::string(text) + "' must be method,m[,k]");

  SolverSpec s;
  if (parts[0] == "dgmres") {
    s.method = Method::dgmres;
  } else if (parts[0] == "adgmres") {
    s.method = Method::adgmres;
  } else {
    throw UsageError("unknown method '" + parts[0] + "' (expected dgmres or adgmres)");
  }
  s.m = parse_count(parts[1], "restart size m");
  s.k = parts.size() == 3 ? parse_count(parts[2], "augmentation count k") : 0;
  if (s.method == Method::dgmres && s.k != 0)
    throw UsageError("dgmres takes no augmentation (k must be 0)");
  return s;
}

bool RunReport::all_converged() const {
  for (const auto& r : runs)
    if (!r.history.converged) return false;
  return true;
}

bool detect_stagnation(const RunHistory& h, std::size_t window, double factor) {
  if (h.converged || h.cycles.empty()) return false;
  const CycleRecord& last = h.cycles.back();
  if (last.cycle < window) return false;
  const auto earlier = relative_at(h, last.cycle - window);
  if (!earlier) return false;
  return *earlier < factor * last.relative_seminorm;
}

std::vector<std::string> fairness_warnings(const std::vector<SolverSpec>& solvers) {
  std::vector<std::string> out;
  for (const auto& aug : solvers) {
    if (aug.method != Method::adgmres) continue;
    for (const auto& plain : solvers) {
      if (plain.method != Method::dgmres) continue;
      if (plain.m != aug.m + aug.k)
        out.push_back("subspace sizes differ: " + aug.label() + " vs " + plain.label() +
                      " (m_dgmres != m_adgmres + k)");
    }
  }
  return out;
}

RunReport run_compare(const Problem& problem, const DenseVector& x0,
                      const std::vector<SolverSpec>& solvers,
                      const CompareOptions& opts) {
  RunReport report;
  report.problem = problem.name;
  report.index_a = problem.index_a;
  report.warnings = fairness_warnings(solvers);
  for (const auto& s : solvers)
    if (s.m <= problem.index_a)
      throw UsageError(s.label() + ": restart size m must exceed the index a=" +
                       std::to_string(problem.index_a));

  if (opts.concurrent && solvers.size() > 1) {
    std::vector<std::future<SolverOutcome>> jobs;
    for (const auto& s : solvers)
      jobs.push_back(std::async(std::launch::async, run_one, std::cref(problem),
                                std::cref(x0), s, std::cref(opts)));
    for (auto& j : jobs) report.runs.push_back(j.get());
  } else {
    for (const auto& s : solvers) report.runs.push_back(run_one(problem, x0, s, opts));
  }

  if (problem.A.rows() <= opts.oracle_size_cap) {
    try {
      DenseVector xd = oracle::drazin_solution(problem.A, problem.b);
      const double scale = norm2(xd);
      for (auto& r : report.runs) {
        const double err = norm2(r.history.final_x - xd);
        r.oracle_error = scale > 0.0 ? err / scale : err;
      }
      report.oracle_solution = std::move(xd);
    } catch (const AxiomError& e) {
      report.warnings.push_back(std::string("oracle unavailable: ") + e.what());
    }
  }
  return report;
}

std::optional<double> relative_at(const RunHistory& h, std::size_t cycle) {
  if (cycle < h.cycles.size() && h.cycles[cycle].cycle == cycle)
    return h.cycles[cycle].relative_seminorm;
  for (const auto& rec : h.cycles)
    if (rec.cycle == cycle) return rec.relative_seminorm;
  return std::nullopt;
}

void write_history_csv(std::ostream& out, const RunReport& report) {
  out << "solver,cycle,seminorm,relative_seminorm,wall_time_s\n";
  for (const auto& r : report.runs) {
    const std::string label = r.spec.label();
    for (const auto& c : r.history.cycles) {
      out << label << ',' << c.cycle << ',' << format17(c.seminorm) << ','
          << format17(c.relative_seminorm) << ',' << format17(c.wall_time) << '\n';
    }
  }
}

void export_history(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_history_csv(out, report);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<CsvRow> read_history_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty history file", 1);
  ++lineno;
  if (line != "solver,cycle,seminorm,relative_seminorm,wall_time_s")
    throw ParseError("unexpected history header", lineno);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw ParseError("expected 5 fields", lineno);
    try {
      rows.push_back({f[0], std::stoul(f[1]), std::stod(f[2]), std::stod(f[3]),
                      std::stod(f[4])});
    } catch (const std::exception&) {
      throw ParseError("malformed number", lineno);
    }
  }
  return rows;
}

void write_plot_data(std::ostream& out, const RunReport& report) {
  bool first = true;
  for (const auto& r : report.runs) {
    if (!first) out << "\n\n";
    first = false;
    out << "# " << r.spec.label() << '\n';
    for (const auto& c : r.history.cycles)
      out << c.cycle << ' ' << format17(c.relative_seminorm) << '\n';
  }
}

void export_plot_data(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_plot_data(out, report);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace drazinkit::cli
