#include "drazinkit/densela.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drazinkit {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

// --- DenseVector ------------------------------------------------------------

DenseVector DenseVector::from_real(std::span<const double> values) {
  DenseVector v(values.size());
  std::copy(values.begin(), values.end(), v.begin());
  return v;
}

DenseVector DenseVector::unit(std::size_t n, std::size_t i) {
  DenseVector v(n);
  v[i] = 1.0;
  return v;
}

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  require_same_size(size(), other.size(), "vector +=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  require_same_size(size(), other.size(), "vector -=");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator*=(Scalar s) {
  for (auto& x : data_) x *= s;
  return *this;
}

DenseVector operator+(DenseVector lhs, const DenseVector& rhs) {
  lhs += rhs;
  return lhs;
}

DenseVector operator-(DenseVector lhs, const DenseVector& rhs) {
  lhs -= rhs;
  return lhs;
}

DenseVector operator*(Scalar s, DenseVector v) {
  v *= s;
  return v;
}

// --- DenseMatrix ------------------------------------------------------------

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<Scalar>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.resize(rows_ * cols_);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
    std::size_t j = 0;
    for (const auto& x : row) (*this)(i, j++) = x;
    ++i;
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_columns(std::span<const DenseVector> columns,
                                      std::size_t rows) {
  DenseMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    require_same_size(columns[j].size(), rows, "from_columns");
    std::copy(columns[j].begin(), columns[j].end(), m.col(j).begin());
  }
  return m;
}

DenseVector DenseMatrix::column(std::size_t j) const {
  auto c = col(j);
  return DenseVector(std::vector<Scalar>(c.begin(), c.end()));
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw DimensionError("block out of range");
  }
  DenseMatrix b(nr, nc);
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t i = 0; i < nr; ++i) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = std::conj((*this)(i, j));
  return t;
}

DenseMatrix operator+(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionError("matrix +: shape mismatch");
  DenseMatrix out = lhs;
  for (std::size_t j = 0; j < lhs.cols(); ++j)
    for (std::size_t i = 0; i < lhs.rows(); ++i) out(i, j) += rhs(i, j);
  return out;
}

DenseMatrix operator-(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionError("matrix -: shape mismatch");
  DenseMatrix out = lhs;
  for (std::size_t j = 0; j < lhs.cols(); ++j)
    for (std::size_t i = 0; i < lhs.rows(); ++i) out(i, j) -= rhs(i, j);
  return out;
}

DenseMatrix operator*(Scalar s, DenseMatrix m) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (auto& x : m.col(j)) x *= s;
  return m;
}

// --- kernels ----------------------------------------------------------------

Scalar dot(std::span<const Scalar> x, std::span<const Scalar> y) {
  require_same_size(x.size(), y.size(), "dot");
  Scalar s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double norm2(std::span<const Scalar> x) {
  // Scaled accumulation so that tiny or huge entries do not under/overflow.
  double scale = 0.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& v : x) sum += std::norm(v / scale);
  return scale * std::sqrt(sum);
}

double frobenius_norm(const DenseMatrix& m) { return norm2(m.data()); }

bool all_finite(std::span<const Scalar> x) {
  return std::all_of(x.begin(), x.end(), [](const Scalar& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

void require_finite(const DenseMatrix& m, const char* what) {
  if (!all_finite(m.data()))
    throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

void require_finite(const DenseVector& v, const char* what) {
  if (!all_finite(v.span()))
    throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  require_same_size(a.cols(), x.size(), "matvec");
  DenseVector y(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const Scalar xj = x[j];
    if (xj == Scalar{}) continue;
    auto c = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += c[i] * xj;
  }
  return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a.cols(), b.rows(), "matmul");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Scalar s{};
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      c(i, j) = s;
    }
  }
  return c;
}

DenseVector power_apply(const DenseMatrix& a, std::size_t p, DenseVector x) {
  if (!a.square()) throw DimensionError("power_apply: matrix is not square");
  require_same_size(a.cols(), x.size(), "power_apply");
  for (std::size_t i = 0; i < p; ++i) x = matvec(a, x);
  return x;
}

DenseMatrix matrix_power(const DenseMatrix& a, std::size_t p) {
  if (!a.square()) throw DimensionError("matrix_power: matrix is not square");
  DenseMatrix out = DenseMatrix::identity(a.rows());
  for (std::size_t i = 0; i < p; ++i) out = matmul(a, out);
  return out;
}

// --- orthogonalization ------------------------------------------------------

OrthoResult mgs_orthogonalize(std::span<const DenseVector> basis, DenseVector w,
                              double breakdown_tol) {
  OrthoResult out;
  out.coeffs = DenseVector(basis.size());
  const double input_norm = norm2(w);

  auto sweep = [&] {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Scalar h = dot(basis[i].span(), w.span());
      out.coeffs[i] += h;
      auto vi = basis[i].span();
      for (std::size_t r = 0; r < w.size(); ++r) w[r] -= h * vi[r];
    }
  };

  sweep();
  double remainder = norm2(w);
  if (!basis.empty() && remainder < input_norm / std::sqrt(2.0)) {
    sweep();
    remainder = norm2(w);
  }

  out.hnext = remainder;
  if (remainder > breakdown_tol * input_norm && remainder > 0.0) {
    w *= 1.0 / remainder;
    out.vnext = std::move(w);
  }
  return out;
}

// --- QR ---------------------------------------------------------------------

QrFactors qr_factor(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows < cols) throw DimensionError("qr_factor: needs rows >= cols");

  DenseMatrix work = m;
  // Householder vectors, each normalized to unit length (empty = identity).
  std::vector<DenseVector> reflectors(cols);

  for (std::size_t k = 0; k < cols; ++k) {
    auto col = work.col(k).subspan(k);
    const double xnorm = norm2(col);
    if (xnorm == 0.0) continue;
    const Scalar x0 = col[0];
    const Scalar phase = (x0 == Scalar{}) ? Scalar{1.0} : x0 / std::abs(x0);
    const Scalar alpha = -phase * xnorm;

    DenseVector v(rows - k);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = col[i];
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    v *= 1.0 / vnorm;

    for (std::size_t j = k; j < cols; ++j) {
      auto cj = work.col(j).subspan(k);
      const Scalar s = 2.0 * dot(v.span(), cj);
      for (std::size_t i = 0; i < v.size(); ++i) cj[i] -= s * v[i];
    }
    reflectors[k] = std::move(v);
  }

  QrFactors f{DenseMatrix(rows, cols), DenseMatrix(cols, cols)};
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i <= j; ++i) f.r(i, j) = work(i, j);

  for (std::size_t j = 0; j < cols; ++j) f.q(j, j) = 1.0;
  for (std::size_t kk = cols; kk-- > 0;) {
    const auto& v = reflectors[kk];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      auto qj = f.q.col(j).subspan(kk);
      const Scalar s = 2.0 * dot(v.span(), qj);
      for (std::size_t i = 0; i < v.size(); ++i) qj[i] -= s * v[i];
    }
  }
  return f;
}

DenseVector solve_upper_triangular(const DenseMatrix& r, const DenseVector& c,
                                   double singular_tol) {
  if (!r.square()) throw DimensionError("solve_upper_triangular: not square");
  require_same_size(r.rows(), c.size(), "solve_upper_triangular");
  const std::size_t n = r.rows();
  const double threshold = singular_tol * frobenius_norm(r);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(r(i, i)) > threshold)) {
      throw RankDeficientError(
          "solve_upper_triangular: negligible diagonal at index " +
              std::to_string(i),
          i);
    }
  }
  DenseVector y = c;
  for (std::size_t ii = n; ii-- > 0;) {
    Scalar s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * y[j];
    y[ii] = s / r(ii, ii);
  }
  return y;
}

LeastSquaresResult least_squares(const DenseMatrix& m, const DenseVector& rhs,
                                 double singular_tol) {
  require_same_size(m.rows(), rhs.size(), "least_squares");
  const auto qr = qr_factor(m);
  const DenseMatrix qh = qr.q.adjoint();
  const DenseVector c = matvec(qh, rhs);

  LeastSquaresResult out;
  out.y = DenseVector(m.cols());
  std::size_t used = m.cols();
  DenseVector y_lead;
  while (used > 0) {
    try {
      y_lead = solve_upper_triangular(qr.r.block(0, 0, used, used),
                                      DenseVector(std::vector<Scalar>(
                                          c.begin(), c.begin() + used)),
                                      singular_tol);
      break;
    } catch (const RankDeficientError& e) {
      used = e.index();
    }
  }
  for (std::size_t i = 0; i < used; ++i) out.y[i] = y_lead[i];
  out.rank = used;
  out.residual = norm2(rhs - matvec(m, out.y));
  return out;
}

// --- rank -------------------------------------------------------------------

std::vector<std::size_t> pivot_columns(const DenseMatrix& m, double tol) {
  DenseMatrix work = m;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const double threshold = tol * frobenius_norm(m);
  std::vector<std::size_t> colperm(cols);
  for (std::size_t j = 0; j < cols; ++j) colperm[j] = j;

  std::vector<std::size_t> pivots;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t pi = s, pj = s;
    double best = -1.0;
    for (std::size_t j = s; j < cols; ++j)
      for (std::size_t i = s; i < rows; ++i)
        if (std::abs(work(i, j)) > best) {
          best = std::abs(work(i, j));
          pi = i;
          pj = j;
        }
    if (!(best > threshold)) break;
    if (pi != s)
      for (std::size_t j = 0; j < cols; ++j) std::swap(work(s, j), work(pi, j));
    if (pj != s) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(work(i, s), work(i, pj));
      std::swap(colperm[s], colperm[pj]);
    }
    pivots.push_back(colperm[s]);
    const Scalar p = work(s, s);
    for (std::size_t i = s + 1; i < rows; ++i) {
      const Scalar f = work(i, s) / p;
      if (f == Scalar{}) continue;
      for (std::size_t j = s; j < cols; ++j) work(i, j) -= f * work(s, j);
    }
  }
  return pivots;
}

std::size_t rank_of(const DenseMatrix& m, double tol) {
  return pivot_columns(m, tol).size();
}

}  // namespace drazinkit
