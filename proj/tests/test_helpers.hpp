#pragma once

// Small independent helpers for the test suites. Nothing here calls into the
// library's kernels, so the checks do not share code with what they verify.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "drazinkit/densela.hpp"

namespace testutil {

using drazinkit::DenseMatrix;
using drazinkit::DenseVector;
using drazinkit::Scalar;

inline DenseMatrix naive_mul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar s{};
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

inline DenseVector naive_mul(const DenseMatrix& a, const DenseVector& x) {
  DenseVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) y[i] += a(i, l) * x[l];
  return y;
}

inline double fro(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
  return std::sqrt(s);
}

inline double nrm(const DenseVector& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline DenseMatrix diff(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline DenseVector diff(const DenseVector& a, const DenseVector& b) {
  DenseVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline DenseMatrix naive_power(const DenseMatrix& a, std::size_t p) {
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) r(i, i) = 1.0;
  for (std::size_t k = 0; k < p; ++k) r = naive_mul(r, a);
  return r;
}

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  DenseMatrix m(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) m(i, j) = d(rng);
  return m;
}

inline DenseVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  DenseVector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

/// Householder reflector I - 2 u u^T / (u^T u) for a random u: orthogonal and
/// its own inverse.
inline DenseMatrix random_reflector(std::size_t n, std::mt19937_64& rng) {
  DenseVector u = random_vector(n, rng);
  double uu = 0.0;
  for (const auto& x : u) uu += std::norm(x);
  DenseMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = (i == j ? 1.0 : 0.0) - 2.0 * u[i] * std::conj(u[j]) / uu;
  return h;
}

/// A random singular matrix with known structure: a block-diagonal core with
/// eigenvalues of magnitude in [0.5, 2] and a nilpotent Jordan part of total
/// size `nil` whose largest block has size `index`, rotated by a Householder
/// reflector. Returns the rotated matrix, its exact Drazin inverse and index.
struct PlantedSingular {
  DenseMatrix A;
  DenseMatrix drazin;
  std::size_t index = 0;
};

inline PlantedSingular planted_singular(std::size_t n, std::size_t index,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  const std::size_t core = n - index - (n > 2 * index + 1 ? 1 : 0);
  DenseMatrix j(n, n);
  DenseMatrix jd(n, n);
  // Upper triangular core: eigenvalues on the diagonal, small coupling above.
  std::uniform_real_distribution<double> up(-0.3, 0.3);
  for (std::size_t i = 0; i < core; ++i) {
    j(i, i) = mag(rng) * (sign(rng) ? 1.0 : -1.0);
    for (std::size_t c = i + 1; c < core; ++c) j(i, c) = up(rng);
  }
  // Nilpotent part: one block of size `index`, the remainder 1x1 zeros.
  for (std::size_t i = core; i + 1 < core + index; ++i) j(i, i + 1) = 1.0;

  // Inverse of the triangular core by back substitution, column by column.
  for (std::size_t c = 0; c < core; ++c) {
    for (std::size_t ii = c + 1; ii-- > 0;) {
      Scalar s = (ii == c) ? Scalar(1.0) : Scalar{};
      for (std::size_t l = ii + 1; l <= c; ++l) s -= j(ii, l) * jd(l, c);
      jd(ii, c) = s / j(ii, ii);
    }
  }
  const DenseMatrix h = random_reflector(n, rng);
  return {naive_mul(h, naive_mul(j, h)), naive_mul(h, naive_mul(jd, h)), index};
}

}  // namespace testutil
