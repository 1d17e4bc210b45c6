#pragma once

// Dense complex linear algebra used by the solvers and the oracle.
//
// Matrices are stored column-major. Everything here is a pure function of its
// arguments and may be called concurrently.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "drazinkit/errors.hpp"

namespace drazinkit {

using Scalar = std::complex<double>;

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, Scalar fill = Scalar{}) : data_(n, fill) {}
  DenseVector(std::initializer_list<Scalar> values) : data_(values) {}
  explicit DenseVector(std::vector<Scalar> values) : data_(std::move(values)) {}

  static DenseVector from_real(std::span<const double> values);
  static DenseVector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  const Scalar& operator[](std::size_t i) const { return data_[i]; }

  std::span<Scalar> span() noexcept { return data_; }
  std::span<const Scalar> span() const noexcept { return data_; }
  const std::vector<Scalar>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(Scalar s);

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<Scalar> data_;
};

DenseVector operator+(DenseVector lhs, const DenseVector& rhs);
DenseVector operator-(DenseVector lhs, const DenseVector& rhs);
DenseVector operator*(Scalar s, DenseVector v);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Row-major nested initializer, the way matrices are usually written.
  DenseMatrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
  }
  static DenseMatrix from_columns(std::span<const DenseVector> columns,
                                  std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) {
    return data_[j * rows_ + i];
  }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  std::span<Scalar> col(std::size_t j) {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<const Scalar> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }
  DenseVector column(std::size_t j) const;

  /// Copy of the block starting at (r0, c0).
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                    std::size_t nc) const;
  DenseMatrix adjoint() const;

  std::span<const Scalar> data() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

DenseMatrix operator+(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix operator-(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix operator*(Scalar s, DenseMatrix m);

// --- basic kernels --------------------------------------------------------

/// Conjugate-linear in the first argument: sum conj(x_i) * y_i.
Scalar dot(std::span<const Scalar> x, std::span<const Scalar> y);
double norm2(std::span<const Scalar> x);
inline double norm2(const DenseVector& x) { return norm2(x.span()); }
double frobenius_norm(const DenseMatrix& m);

bool all_finite(std::span<const Scalar> x);
/// Throws NonFiniteError naming `what` when any entry is NaN or infinite.
void require_finite(const DenseMatrix& m, const char* what);
void require_finite(const DenseVector& v, const char* what);

DenseVector matvec(const DenseMatrix& a, const DenseVector& x);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// A^p x by p successive products; A^p is never formed.
DenseVector power_apply(const DenseMatrix& a, std::size_t p, DenseVector x);
/// Explicit A^p (A^0 = I). Only the oracle and tests form powers.
DenseMatrix matrix_power(const DenseMatrix& a, std::size_t p);

// --- orthogonalization ----------------------------------------------------

struct OrthoResult {
  DenseVector coeffs;  // h_{i,j} = <w, v_i>, one per basis vector
  double hnext = 0.0;  // norm of the orthogonalized remainder
  std::optional<DenseVector> vnext;  // empty on breakdown

  bool breakdown() const noexcept { return !vnext.has_value(); }
};

/// Modified Gram-Schmidt of `w` against `basis`, with a second pass when the
/// norm drops below 1/sqrt(2) of its input. Breakdown is signalled when the
/// remainder is at most `breakdown_tol * ||w||`. Zero vectors in the basis are
/// allowed and contribute zero coefficients.
OrthoResult mgs_orthogonalize(std::span<const DenseVector> basis, DenseVector w,
                              double breakdown_tol);

// --- QR and triangular solves ---------------------------------------------

struct QrFactors {
  DenseMatrix q;  // rows x cols, orthonormal columns
  DenseMatrix r;  // cols x cols, upper triangular
};

/// Householder QR, thin form. Requires rows >= cols.
QrFactors qr_factor(const DenseMatrix& m);

/// Back substitution. Throws RankDeficientError when
/// |R(i,i)| <= singular_tol * ||R||_F.
DenseVector solve_upper_triangular(const DenseMatrix& r, const DenseVector& c,
                                   double singular_tol = 1e-14);

struct LeastSquaresResult {
  DenseVector y;          // length = cols; trailing entries zero if truncated
  double residual = 0.0;  // ||rhs - M y||
  std::size_t rank = 0;   // number of leading columns actually used
};

/// min ||rhs - M y|| by QR. If R has a negligible diagonal entry at index i,
/// the problem is restricted to the leading i columns of M.
LeastSquaresResult least_squares(const DenseMatrix& m, const DenseVector& rhs,
                                 double singular_tol = 1e-14);

// --- eigenvalues ----------------------------------------------------------

struct EigenPair {
  Scalar value;
  DenseVector vector;     // unit 2-norm
  double residual = 0.0;  // ||H y - value y||
};

struct EigOptions {
  std::size_t max_dim = 200;
  std::size_t max_sweeps = 60;  // QR sweeps allowed per deflation
  double resid_tol = 1e-8;      // relative to ||H||_F
};

/// All eigenpairs of an upper Hessenberg matrix: eigenvalues by shifted QR,
/// eigenvectors by inverse iteration on H - lambda I.
std::vector<EigenPair> hessenberg_eig(const DenseMatrix& h,
                                      const EigOptions& opts = {});

// --- rank -----------------------------------------------------------------

/// Columns chosen as pivots by Gauss elimination with full pivoting, stopping
/// at the first pivot with magnitude <= tol * ||M||_F.
std::vector<std::size_t> pivot_columns(const DenseMatrix& m, double tol);
std::size_t rank_of(const DenseMatrix& m, double tol);

}  // namespace drazinkit
