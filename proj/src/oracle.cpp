#include "drazinkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drazinkit::oracle {

namespace {

double scaled(double residual, double denom) {
  return denom > 0.0 ? residual / denom : residual;
}

void require_square(const DenseMatrix& a, const char* what) {
  if (!a.square() || a.rows() == 0)
    throw DimensionError(std::string(what) + ": matrix must be square and non-empty");
}

// Full-pivot Gauss-Jordan. Row operations accumulate into `left`, column
// operations into `right`, so that left * B * right = [I_r 0; 0 rest].
DenseMatrix gauss_jordan_inverse(const DenseMatrix& b, std::optional<std::size_t> rank,
                                 double tol) {
  const std::size_t n = b.rows();
  DenseMatrix work = b;
  DenseMatrix left = DenseMatrix::identity(n);
  DenseMatrix right = DenseMatrix::identity(n);
  const double threshold = tol * frobenius_norm(b);
  const std::size_t steps = rank ? std::min(*rank, n) : n;

  std::size_t r = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t pi = s, pj = s;
    double best = -1.0;
    for (std::size_t j = s; j < n; ++j)
      for (std::size_t i = s; i < n; ++i)
        if (std::abs(work(i, j)) > best) {
          best = std::abs(work(i, j));
          pi = i;
          pj = j;
        }
    if (rank ? !(best > 0.0) : !(best > threshold)) break;

    if (pi != s)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(s, j), work(pi, j));
        std::swap(left(s, j), left(pi, j));
      }
    if (pj != s)
      for (std::size_t i = 0; i < n; ++i) {
        std::swap(work(i, s), work(i, pj));
        std::swap(right(i, s), right(i, pj));
      }

    const Scalar inv = 1.0 / work(s, s);
    for (std::size_t j = 0; j < n; ++j) {
      work(s, j) *= inv;
      left(s, j) *= inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == s) continue;
      const Scalar f = work(i, s);
      if (f == Scalar{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(s, j);
        left(i, j) -= f * left(s, j);
      }
    }
    for (std::size_t j = s + 1; j < n; ++j) {
      const Scalar f = work(s, j);
      if (f == Scalar{}) continue;
      work(s, j) = 0.0;
      for (std::size_t i = 0; i < n; ++i) right(i, j) -= f * right(i, s);
    }
    ++r;
  }

  // G = right[:, :r] * left[:r, :]
  DenseMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      Scalar s{};
      for (std::size_t l = 0; l < r; ++l) s += right(i, l) * left(l, j);
      g(i, j) = s;
    }
  return g;
}

}  // namespace

IndexInfo index_info(const DenseMatrix& a, double tol) {
  require_square(a, "index_of");
  require_finite(a, "index_of input");
  const std::size_t n = a.rows();

  // basis spans range(A^p) with unit columns; starts as I for p = 0.
  DenseMatrix basis = DenseMatrix::identity(n);
  std::size_t prev_rank = n;
  for (std::size_t p = 0; p <= n; ++p) {
    DenseMatrix image = matmul(a, basis);
    const auto cols = pivot_columns(image, tol);
    if (cols.size() == prev_rank) return {p, prev_rank};
    DenseMatrix next(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto src = image.col(cols[j]);
      const double nrm = norm2(src);
      auto dst = next.col(j);
      for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] / nrm;
    }
    basis = std::move(next);
    prev_rank = cols.size();
    if (prev_rank == 0) return {p + 1, 0};
  }
  return {n, prev_rank};
}

std::size_t index_of(const DenseMatrix& a, double tol) {
  return index_info(a, tol).index;
}

DenseMatrix one_inverse(const DenseMatrix& b, double tol) {
  require_square(b, "one_inverse");
  return gauss_jordan_inverse(b, std::nullopt, tol);
}

DenseMatrix one_inverse_with_rank(const DenseMatrix& b, std::size_t rank) {
  require_square(b, "one_inverse");
  return gauss_jordan_inverse(b, rank, 0.0);
}

double AxiomResiduals::worst() const {
  return std::max({core, reflexive, commute});
}

AxiomResiduals axiom_residuals(const DenseMatrix& a, const DenseMatrix& x,
                               std::size_t index_a) {
  const double na = frobenius_norm(a);
  const double nx = frobenius_norm(x);
  const DenseMatrix pa = matrix_power(a, index_a);
  const DenseMatrix pa1 = matmul(a, pa);
  const DenseMatrix ax = matmul(a, x);
  AxiomResiduals r;
  r.core = scaled(frobenius_norm(matmul(pa1, x) - pa),
                  std::pow(na, double(index_a + 1)) * nx);
  r.reflexive = scaled(frobenius_norm(matmul(x, ax) - x), nx * nx * na);
  r.commute = scaled(frobenius_norm(ax - matmul(x, a)), na * nx);
  return r;
}

DrazinFactors drazin_inverse(const DenseMatrix& a, const DrazinOptions& opts) {
  const IndexInfo info = index_info(a, opts.rank_tol);
  const std::size_t l = opts.power_l.value_or(info.index);
  if (l < info.index)
    throw ConfigError("drazin_inverse: power l=" + std::to_string(l) +
                      " is below ind(A)=" + std::to_string(info.index));

  DrazinFactors f;
  f.index_a = info.index;
  f.power_l = l;
  const DenseMatrix al = matrix_power(a, l);
  const DenseMatrix big = matmul(al, matmul(al, a));
  // rank(A^{2l+1}) = rank(A^ind) for every l >= ind(A).
  f.one_inverse_B = one_inverse_with_rank(big, info.core_rank);
  f.drazin = matmul(al, matmul(f.one_inverse_B, al));

  const AxiomResiduals r = axiom_residuals(a, f.drazin, info.index);
  if (!(r.worst() <= opts.axiom_tol)) {
    throw AxiomError("drazin_inverse: axiom check failed (core " +
                         std::to_string(r.core) + ", reflexive " +
                         std::to_string(r.reflexive) + ", commute " +
                         std::to_string(r.commute) + ")",
                     r.core, r.reflexive, r.commute);
  }
  return f;
}

DenseVector drazin_solution(const DenseMatrix& a, const DenseVector& b,
                            const DrazinOptions& opts) {
  if (b.size() != a.rows()) throw DimensionError("drazin_solution: size mismatch");
  require_finite(b, "drazin_solution rhs");
  return matvec(drazin_inverse(a, opts).drazin, b);
}

}  // namespace drazinkit::oracle
