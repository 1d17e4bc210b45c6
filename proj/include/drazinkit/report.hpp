#pragma once

// Side-by-side solver runs, oracle cross-checks and history export.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drazinkit/adgmres.hpp"
#include "drazinkit/dgmres.hpp"
#include "drazinkit/problems.hpp"

namespace drazinkit::cli {

enum class Method { dgmres, adgmres };

struct SolverSpec {
  Method method = Method::dgmres;
  std::size_t m = 0;
  std::size_t k = 0;

  /// "dgmres_m7" or "adgmres_m6_k1"; never contains a comma.
  std::string label() const;
  bool operator==(const SolverSpec&) const = default;
};

/// Parses "method,m,k" (k may be omitted for dgmres).
SolverSpec parse_solver_spec(std::string_view text);

struct CompareOptions {
  double eps = 1e-12;
  std::size_t max_cycles = 10000;
  std::size_t oracle_size_cap = 500;
  bool concurrent = true;
  SolverConfig base;  // tolerances other than eps / m / a
};

struct SolverOutcome {
  SolverSpec spec;
  RunHistory history;
  std::optional<double> oracle_error;  // ||x - A^D b|| / ||A^D b||
  std::optional<std::size_t> cycles_to_tolerance;
  bool stagnated = false;
  std::size_t fallback_cycles = 0;
};

struct RunReport {
  std::string problem;
  std::size_t index_a = 0;
  std::vector<SolverOutcome> runs;
  std::optional<DenseVector> oracle_solution;
  std::vector<std::string> warnings;

  bool all_converged() const;
};

/// True iff the run did not converge and its relative seminorm improved by a
/// factor below `factor` over the trailing `window` cycles.
bool detect_stagnation(const RunHistory& h, std::size_t window = 50,
                       double factor = 10.0);

/// One warning per (adgmres, dgmres) pair whose subspace sizes differ, i.e.
/// m_dgmres != m_adgmres + k.
std::vector<std::string> fairness_warnings(const std::vector<SolverSpec>& solvers);

/// Runs every solver from the same x0 on `problem` (using problem.index_a).
RunReport run_compare(const Problem& problem, const DenseVector& x0,
                      const std::vector<SolverSpec>& solvers,
                      const CompareOptions& opts);

/// Relative seminorm recorded at `cycle`, if the run got that far.
std::optional<double> relative_at(const RunHistory& h, std::size_t cycle);

// --- export ----------------------------------------------------------------

struct CsvRow {
  std::string solver;
  std::size_t cycle = 0;
  double seminorm = 0.0;
  double relative_seminorm = 0.0;
  double wall_time_s = 0.0;
};

/// Header `solver,cycle,seminorm,relative_seminorm,wall_time_s`, then one row
/// per cycle per solver in configured order, values at 17 significant digits.
void write_history_csv(std::ostream& out, const RunReport& report);
void export_history(const RunReport& report, const std::filesystem::path& path);
std::vector<CsvRow> read_history_csv(std::istream& in);

/// Gnuplot blocks: "# <label>" then "cycle relative_seminorm" lines, blocks
/// separated by two blank lines.
void write_plot_data(std::ostream& out, const RunReport& report);
void export_plot_data(const RunReport& report, const std::filesystem::path& path);

}  // namespace drazinkit::cli
