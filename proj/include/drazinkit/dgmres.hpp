#pragma once

// Restarted DGMRES(m): minimizes ||A^a (b - A x)|| over x0 + K_m(A; A^a r0),
// where K_m(A; A^a r0) = span{A^a r0, ..., A^{m-1} r0} has dimension m - a.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "drazinkit/densela.hpp"

namespace drazinkit {

struct SolverConfig {
  std::size_t index_a = 0;     // a = ind(A), supplied by the caller
  std::size_t restart_m = 10;  // m; the Krylov search space has m - a columns
  double tol_eps = 1e-12;      // stop when ||A^a r|| / ||A^a b|| < tol_eps
  std::size_t max_cycles = 10000;
  double breakdown_tol = 1e-13;
  double zero_ritz_tol = 1e-8;     // Ritz values below this * ||A||_F are dropped
  double augment_tol = 1e-10;      // Ritz vectors closer than this to the span are inactive
  double ls_singular_tol = 1e-14;  // least-squares truncation threshold

  /// Throws ConfigError unless restart_m > index_a and tol_eps > 0.
  void validate() const;
};

/// Orthonormal Arnoldi vectors and the extended Hessenberg matrix with
/// A V_j = V_{j+1} Hbar_j. Without breakdown after `steps` steps, V holds
/// steps + 1 vectors and Hbar is (steps + 1) x steps. On breakdown at step j
/// the space is invariant: V holds j vectors and Hbar is j x j.
struct KrylovBasis {
  std::vector<DenseVector> V;
  DenseMatrix Hbar;
  std::optional<std::size_t> breakdown_at;

  std::size_t width() const noexcept { return Hbar.cols(); }
};

KrylovBasis build_krylov(const DenseMatrix& a, const DenseVector& seed,
                         std::size_t steps, const SolverConfig& cfg);

/// Hhat_m = Hbar_m Hbar_{m-1} ... Hbar_{m-a}, built from the leading blocks of
/// one Arnoldi matrix. For an (m+1) x m input the result is (m+1) x (m-a).
/// A breakdown-truncated (j x j) input is accepted: blocks are clipped to it.
DenseMatrix stacked_hessenberg(const DenseMatrix& hbar_full, std::size_t m,
                               std::size_t a);

struct CycleResult {
  DenseVector x_new;
  double seminorm = 0.0;      // ||A^a (b - A x_new)||, recomputed directly
  double ls_residual = 0.0;   // ||beta e1 - H y||
  std::size_t basis_dim = 0;  // columns used by the least-squares solve
  bool breakdown = false;
  std::size_t matvecs = 0;

  // Filled by the augmented solver only.
  bool fallback = false;        // Ritz extraction failed; plain DGMRES used
  std::size_t augmented = 0;    // Ritz vectors that widened the search space
  std::vector<Scalar> ritz_values;
};

CycleResult dgmres_cycle(const DenseMatrix& a, const DenseVector& b,
                         const DenseVector& x0, const SolverConfig& cfg);

struct CycleRecord {
  std::size_t cycle = 0;  // 0 is the initial guess
  double seminorm = 0.0;
  double relative_seminorm = 0.0;  // seminorm / ||A^a b|| (raw if that is 0)
  double wall_time = 0.0;          // seconds since the solve started
  std::size_t matvecs = 0;         // cumulative
  bool fallback = false;
};

struct RunHistory {
  std::vector<CycleRecord> cycles;
  bool converged = false;
  DenseVector final_x;
};

/// ||A^a (b - A x)||.
double drazin_seminorm(const DenseMatrix& a, const DenseVector& b,
                       const DenseVector& x, std::size_t index_a);

RunHistory dgmres_restarted(const DenseMatrix& a, const DenseVector& b,
                            const DenseVector& x0, const SolverConfig& cfg);

namespace detail {

using CycleStep = std::function<CycleResult(const DenseVector& x0)>;

/// Restart driver shared by both solvers: records cycle 0, then applies
/// `step` until the relative seminorm drops below tol_eps or max_cycles.
RunHistory restart_loop(const DenseMatrix& a, const DenseVector& b,
                        const DenseVector& x0, const SolverConfig& cfg,
                        const CycleStep& step);

/// Shape, finiteness and config checks common to every solver entry point.
void check_problem(const DenseMatrix& a, const DenseVector& b,
                   const DenseVector& x0, const SolverConfig& cfg);

}  // namespace detail

}  // namespace drazinkit
