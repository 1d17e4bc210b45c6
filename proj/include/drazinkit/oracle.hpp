#pragma once

// Reference Drazin inverse built only from full-pivot elimination. It shares
// no code with the Krylov solvers and exists to check them.

#include <cstddef>
#include <optional>

#include "drazinkit/densela.hpp"

namespace drazinkit::oracle {

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultAxiomTol = 1e-9;

struct IndexInfo {
  std::size_t index = 0;       // ind(A)
  std::size_t core_rank = 0;   // rank(A^index)
};

/// Smallest a >= 0 with rank(A^{a+1}) = rank(A^a). Ranks of powers are taken
/// on A applied to a unit-column basis of range(A^a), never on A^a itself, so
/// small nonzero eigenvalues are not lost to the power's dynamic range.
IndexInfo index_info(const DenseMatrix& a, double tol = kDefaultRankTol);
std::size_t index_of(const DenseMatrix& a, double tol = kDefaultRankTol);

/// G with B G B = B from P B Q = [I_r 0; 0 0], G = Q [I_r 0; 0 0] P.
/// The rank r is decided by `tol` relative to ||B||_F.
DenseMatrix one_inverse(const DenseMatrix& b, double tol = kDefaultRankTol);
/// Same construction with exactly `rank` pivots.
DenseMatrix one_inverse_with_rank(const DenseMatrix& b, std::size_t rank);

struct DrazinFactors {
  std::size_t index_a = 0;
  std::size_t power_l = 0;     // the l used in A^l (A^{2l+1})^{(1)} A^l
  DenseMatrix one_inverse_B;   // {1}-inverse of A^{2l+1}
  DenseMatrix drazin;          // A^D
};

/// Scaled residuals of the three Drazin axioms:
///   ||A^{a+1}X - A^a|| / (||A||^{a+1} ||X||)
///   ||XAX - X|| / (||X||^2 ||A||)
///   ||AX - XA|| / (||A|| ||X||)
/// A zero denominator reports the raw residual.
struct AxiomResiduals {
  double core = 0.0;
  double reflexive = 0.0;
  double commute = 0.0;

  double worst() const;
};

AxiomResiduals axiom_residuals(const DenseMatrix& a, const DenseMatrix& x,
                               std::size_t index_a);

struct DrazinOptions {
  double rank_tol = kDefaultRankTol;
  double axiom_tol = kDefaultAxiomTol;
  std::optional<std::size_t> power_l;  // defaults to ind(A); must be >= ind(A)
};

/// A^D = A^l (A^{2l+1})^{(1)} A^l. Throws AxiomError if the result fails the
/// axiom check at `axiom_tol`.
DrazinFactors drazin_inverse(const DenseMatrix& a, const DrazinOptions& opts = {});

DenseVector drazin_solution(const DenseMatrix& a, const DenseVector& b,
                            const DrazinOptions& opts = {});

}  // namespace drazinkit::oracle
