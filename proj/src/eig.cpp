// Eigenpairs of small upper Hessenberg matrices.
//
// Eigenvalues come from single-shift complex QR with Wilkinson shifts and an
// exceptional shift every tenth sweep without deflation. Eigenvectors come
// from inverse iteration on the original matrix.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drazinkit/densela.hpp"

namespace drazinkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rotation {
  double c;
  Scalar s;
};

// G = [c s; -conj(s) c] with G [x; y] = [r; 0].
Rotation make_rotation(Scalar x, Scalar y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, Scalar{}};
  if (ax == 0.0) return {0.0, Scalar{1.0}};
  const double r = std::hypot(ax, ay);
  return {ax / r, (x / ax) * std::conj(y) / r};
}

Scalar wilkinson_shift(Scalar a, Scalar b, Scalar c, Scalar d) {
  // Eigenvalue of [a b; c d] closest to d.
  const Scalar half = 0.5 * (a - d);
  const Scalar disc = std::sqrt(half * half + b * c);
  const Scalar mu1 = 0.5 * (a + d) + disc;
  const Scalar mu2 = 0.5 * (a + d) - disc;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

std::vector<Scalar> hessenberg_eigenvalues(DenseMatrix t,
                                           std::size_t max_sweeps) {
  const std::size_t n = t.rows();
  std::vector<Scalar> eigs(n);
  if (n == 0) return eigs;
  const double hnorm = std::max(frobenius_norm(t), std::numeric_limits<double>::min());

  std::size_t hi = n - 1;
  std::size_t sweeps = 0;
  while (true) {
    if (hi == 0) {
      eigs[0] = t(0, 0);
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      double s = std::abs(t(lo - 1, lo - 1)) + std::abs(t(lo, lo));
      if (s == 0.0) s = hnorm;
      if (std::abs(t(lo, lo - 1)) <= kEps * s) {
        t(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eigs[hi] = t(hi, hi);
      --hi;
      sweeps = 0;
      continue;
    }
    if (++sweeps > max_sweeps) {
      std::vector<Scalar> partial(eigs.begin() + hi + 1, eigs.end());
      throw ConvergenceError("hessenberg_eig: QR iteration did not converge",
                             std::move(partial));
    }

    Scalar mu;
    if (sweeps % 10 == 0) {
      mu = t(hi, hi) + 0.75 * std::abs(t(hi, hi - 1));
    } else {
      mu = wilkinson_shift(t(hi - 1, hi - 1), t(hi - 1, hi), t(hi, hi - 1),
                           t(hi, hi));
    }

    for (std::size_t i = lo; i <= hi; ++i) t(i, i) -= mu;
    std::vector<Rotation> rots;
    rots.reserve(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Rotation g = make_rotation(t(k, k), t(k + 1, k));
      for (std::size_t j = k; j <= hi; ++j) {
        const Scalar x = t(k, j);
        const Scalar y = t(k + 1, j);
        t(k, j) = g.c * x + g.s * y;
        t(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
      t(k + 1, k) = 0.0;
      rots.push_back(g);
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Rotation& g = rots[k - lo];
      for (std::size_t i = lo; i <= k + 1; ++i) {
        const Scalar x = t(i, k);
        const Scalar y = t(i, k + 1);
        t(i, k) = g.c * x + std::conj(g.s) * y;
        t(i, k + 1) = -g.s * x + g.c * y;
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) t(i, i) += mu;
  }
  return eigs;
}

// LU with partial pivoting; tiny pivots are replaced by `floor` so that the
// shifted system stays solvable when lambda is an exact eigenvalue.
struct ShiftedLu {
  DenseMatrix lu;
  std::vector<std::size_t> perm;
};

ShiftedLu factor_shifted(const DenseMatrix& h, Scalar lambda, double floor) {
  const std::size_t n = h.rows();
  ShiftedLu f{h, std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    f.lu(i, i) -= lambda;
    f.perm[i] = i;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    if (std::abs(f.lu(k, k)) < floor) f.lu(k, k) = floor;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Scalar l = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = l;
      if (l == Scalar{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
    }
  }
  return f;
}

DenseVector lu_solve(const ShiftedLu& f, const DenseVector& b) {
  const std::size_t n = b.size();
  DenseVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

// Unit norm, largest-magnitude component real and positive.
void normalize_phase(DenseVector& y) {
  std::size_t big = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (std::abs(y[i]) > std::abs(y[big])) big = i;
  const double nrm = norm2(y);
  const Scalar phase = std::abs(y[big]) > 0.0 ? std::conj(y[big]) / std::abs(y[big])
                                              : Scalar{1.0};
  y *= phase / nrm;
}

EigenPair inverse_iteration(const DenseMatrix& h, Scalar lambda, double hnorm,
                            const EigOptions& opts) {
  const std::size_t n = h.rows();
  EigenPair best{lambda, DenseVector(n), std::numeric_limits<double>::infinity()};
  // Retry with a slightly perturbed shift if the first attempt stalls.
  for (int attempt = 0; attempt < 3; ++attempt) {
    const Scalar shift = lambda + Scalar(attempt * 1e3 * kEps * hnorm, 0.0);
    const auto f = factor_shifted(h, shift, kEps * hnorm);
    DenseVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / std::sqrt(double(n)) + 0.1 * double(i % 3);
    for (int it = 0; it < 4; ++it) {
      y = lu_solve(f, y);
      const double nrm = norm2(y);
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      y *= 1.0 / nrm;
    }
    if (!all_finite(y.span()) || norm2(y) == 0.0) continue;
    normalize_phase(y);
    const double res = norm2(matvec(h, y) - lambda * y);
    if (res < best.residual) best = EigenPair{lambda, y, res};
    if (res <= opts.resid_tol * hnorm) break;
  }
  return best;
}

}  // namespace

std::vector<EigenPair> hessenberg_eig(const DenseMatrix& h,
                                      const EigOptions& opts) {
  if (!h.square()) throw DimensionError("hessenberg_eig: matrix is not square");
  if (h.rows() > opts.max_dim)
    throw DimensionError("hessenberg_eig: dimension " + std::to_string(h.rows()) +
                         " exceeds limit " + std::to_string(opts.max_dim));
  require_finite(h, "hessenberg_eig input");
  for (std::size_t j = 0; j < h.cols(); ++j)
    for (std::size_t i = j + 2; i < h.rows(); ++i)
      if (h(i, j) != Scalar{})
        throw DimensionError("hessenberg_eig: input is not upper Hessenberg");

  const auto values = hessenberg_eigenvalues(h, opts.max_sweeps);
  const double hnorm = std::max(frobenius_norm(h), std::numeric_limits<double>::min());
  std::vector<EigenPair> pairs;
  pairs.reserve(values.size());
  for (const auto& lambda : values)
    pairs.push_back(inverse_iteration(h, lambda, hnorm, opts));
  return pairs;
}

}  // namespace drazinkit
