#pragma once

// DGMRES augmented with approximate eigenvectors, ADGMRES(m, k).
//
// Each cycle runs m - a Arnoldi steps from A^a r0, takes the k smallest-
// magnitude nonzero Ritz pairs of the square Hessenberg block H#, appends the
// Ritz vectors z_i to the search space W = [v_1 .. v_{m-a}, z_1 .. z_k] and
// minimizes ||beta e1 - Hbar y|| where A^{a+1} W = V^(a) Hbar and
// Hbar = Hbar^(a) ... Hbar^(0).

#include <cstddef>
#include <vector>

#include "drazinkit/dgmres.hpp"

namespace drazinkit {

struct RitzSet {
  std::vector<Scalar> values;         // ascending by magnitude
  std::vector<DenseVector> vectors;   // z_i = V_{m-a} y_i, unit norm
  std::vector<double> residuals;      // ||H# y_i - lambda_i y_i||
  std::size_t discarded_near_zero = 0;

  std::size_t size() const noexcept { return values.size(); }
};

/// Ritz pairs of the leading square block of `basis.Hbar`. Values with
/// |lambda| <= cfg.zero_ritz_tol * a_norm are discarded. Throws RitzError when
/// fewer than k survive.
RitzSet ritz_pairs(const KrylovBasis& basis, std::size_t k,
                   const SolverConfig& cfg, double a_norm);

/// The Hessenberg chain for an augmented search space.
///
/// After stage t the system satisfies A^{t+1} W = V H_product with
/// H_product = H_chain[t] ... H_chain[0]. Stage t keeps the Arnoldi prefix
/// v_1 .. v_{p+t} and rebuilds the k + 1 trailing columns, so every
/// H_chain[t] is (p+k+t+1) x (p+k+t) upper Hessenberg. A column whose
/// extension breaks down gets a zero row and a zero placeholder vector.
struct AugmentedSystem {
  std::size_t krylov_width = 0;  // p: number of Arnoldi columns in W
  DenseMatrix W;                 // n x (p + k)
  std::vector<bool> active;      // W columns that widen the span
  std::vector<DenseVector> V;    // basis after the last completed stage
  std::vector<bool> placeholder; // V entries that are zero fillers
  std::vector<DenseMatrix> H_chain;
  DenseMatrix H_product;
  std::vector<std::size_t> new_coefficients;  // inner products + norms per stage
  std::size_t skipped_columns = 0;            // extension breakdowns
  std::size_t matvecs = 0;

  std::size_t augmented() const noexcept;  // active Ritz columns
};

/// Stage 0: A W = V^(0) Hbar^(0). An empty Ritz set gives Hbar^(0) = Hbar of
/// the Arnoldi run and W = V_p.
AugmentedSystem augment_basis(const DenseMatrix& a, const KrylovBasis& basis,
                              const RitzSet& ritz, const SolverConfig& cfg);

/// Stages 1 .. index_a, reusing the Arnoldi coefficients of the prefix and
/// computing only the trailing k + 1 columns of each Hbar^(t).
AugmentedSystem build_h_chain(const DenseMatrix& a, AugmentedSystem sys,
                              std::size_t index_a, const SolverConfig& cfg);

/// Least-squares step on a completed system: x_new = x0 + W y.
CycleResult minimize_augmented(const DenseMatrix& a, const DenseVector& b,
                               const DenseVector& x0, const AugmentedSystem& sys,
                               double beta, const SolverConfig& cfg);

CycleResult adgmres_cycle(const DenseMatrix& a, const DenseVector& b,
                          const DenseVector& x0, std::size_t k,
                          const SolverConfig& cfg);

RunHistory adgmres_restarted(const DenseMatrix& a, const DenseVector& b,
                             const DenseVector& x0, std::size_t k,
                             const SolverConfig& cfg);

}  // namespace drazinkit
