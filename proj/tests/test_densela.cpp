#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "drazinkit/densela.hpp"
#include "drazinkit/problems.hpp"
#include "test_helpers.hpp"

using namespace drazinkit;
using testutil::fro;
using testutil::nrm;

namespace {

DenseMatrix example4() { return cli::generate_example("ex4").A; }

bool is_close(Scalar a, Scalar b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("matvec") {
  TEST_CASE("identity times a vector") {
    const DenseVector x{1.0, 2.0, 3.0};
    CHECK(matvec(DenseMatrix::identity(3), x) == x);
  }

  TEST_CASE("example 4 product matches a hand-coded row sum") {
    const auto p = cli::generate_example("ex4");
    // Independent: row sums written out from the matrix entries.
    const double b[4] = {-4, 7, 1, 0};
    const double expect[4] = {1 * b[0] + 1 * b[1] + 1 * b[2] + 2 * b[3],
                              1 * b[1] + 3 * b[2] + 4 * b[3], 1 * b[2] + 1 * b[3], 0.0};
    const DenseVector y = matvec(p.A, p.b);
    for (int i = 0; i < 4; ++i) CHECK(y[i] == Scalar(expect[i]));
    CHECK(y == DenseVector{4.0, 10.0, 1.0, 0.0});
  }

  TEST_CASE("zero matrix annihilates") {
    const DenseVector y = matvec(DenseMatrix(3, 3), DenseVector{1.0, -2.0, 5.0});
    CHECK(y == DenseVector(3));
  }

  TEST_CASE("dimension mismatch throws") {
    CHECK_THROWS_AS(matvec(DenseMatrix(3, 2), DenseVector(3)), DimensionError);
    CHECK_THROWS_AS(matmul(DenseMatrix(3, 2), DenseMatrix(3, 2)), DimensionError);
  }

  TEST_CASE("matmul agrees with a naive triple loop") {
    std::mt19937_64 rng(7);
    const auto a = testutil::random_matrix(5, 4, rng);
    const auto b = testutil::random_matrix(4, 6, rng);
    CHECK(fro(testutil::diff(matmul(a, b), testutil::naive_mul(a, b))) <= 1e-13 * fro(a) * fro(b));
  }
}

TEST_SUITE("power_apply") {
  TEST_CASE("p = 0 leaves x unchanged") {
    const DenseVector x{1.0, 2.0};
    CHECK(power_apply(DenseMatrix{{1, 2}, {3, 4}}, 0, x) == x);
  }

  TEST_CASE("nilpotent block squared is zero") {
    const DenseMatrix n{{0, 1}, {0, 0}};
    CHECK(power_apply(n, 2, DenseVector{3.0, -7.0}) == DenseVector(2));
  }

  TEST_CASE("example 1 squared kills the nilpotent components") {
    const auto p = cli::generate_example("ex1");
    const DenseVector y = power_apply(p.A, 2, p.b);
    CHECK(y[10] == Scalar{});
    CHECK(y[11] == Scalar{});
    const DenseVector ref = testutil::naive_mul(testutil::naive_power(p.A, 2), p.b);
    CHECK(y == ref);
  }

  TEST_CASE("matrix_power agrees with repeated products") {
    const DenseMatrix a{{1, 1}, {0, 2}};
    CHECK(matrix_power(a, 0) == DenseMatrix::identity(2));
    CHECK(matrix_power(a, 3) == testutil::naive_power(a, 3));
  }
}

TEST_SUITE("mgs_orthogonalize") {
  TEST_CASE("vector inside the span breaks down") {
    const std::vector<DenseVector> basis{DenseVector{1.0, 0.0}};
    const OrthoResult r = mgs_orthogonalize(basis, DenseVector{2.0, 0.0}, 1e-13);
    REQUIRE(r.coeffs.size() == 1);
    CHECK(r.coeffs[0] == Scalar(2.0));
    CHECK(r.hnext == 0.0);
    CHECK(r.breakdown());
  }

  TEST_CASE("two-dimensional hand case") {
    const std::vector<DenseVector> basis{DenseVector{1.0, 0.0}};
    const OrthoResult r = mgs_orthogonalize(basis, DenseVector{1.0, 1.0}, 1e-13);
    CHECK(r.coeffs[0] == Scalar(1.0));
    CHECK(r.hnext == doctest::Approx(1.0));
    REQUIRE_FALSE(r.breakdown());
    CHECK(is_close((*r.vnext)[0], 0.0, 1e-15));
    CHECK(is_close((*r.vnext)[1], 1.0, 1e-15));
  }

  TEST_CASE("nearly dependent input stays orthogonal after reorthogonalization") {
    std::mt19937_64 rng(3);
    std::vector<DenseVector> basis;
    for (int i = 0; i < 6; ++i) {
      auto w = testutil::random_vector(20, rng);
      auto r = mgs_orthogonalize(basis, w, 1e-13);
      basis.push_back(*r.vnext);
    }
    DenseVector w(20);
    for (const auto& v : basis) w += v;
    w += 1e-9 * testutil::random_vector(20, rng);
    const auto r = mgs_orthogonalize(basis, w, 1e-13);
    REQUIRE_FALSE(r.breakdown());
    for (const auto& v : basis) CHECK(std::abs(dot(v.span(), r.vnext->span())) < 1e-12);
  }

  TEST_CASE("zero basis vectors contribute zero coefficients") {
    const std::vector<DenseVector> basis{DenseVector{1.0, 0.0, 0.0}, DenseVector(3)};
    const auto r = mgs_orthogonalize(basis, DenseVector{1.0, 2.0, 0.0}, 1e-13);
    CHECK(r.coeffs[1] == Scalar{});
    CHECK(r.hnext == doctest::Approx(2.0));
  }
}

TEST_SUITE("qr_factor") {
  TEST_CASE("upper triangular input reproduces R up to column phases") {
    const DenseMatrix m{{2, 1, 3}, {0, 4, 5}, {0, 0, 6}};
    const QrFactors f = qr_factor(m);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(f.r(i, j)) == doctest::Approx(std::abs(m(i, j))));
    CHECK(fro(testutil::diff(testutil::naive_mul(f.q, f.r), m)) <= 1e-14 * fro(m));
  }

  TEST_CASE("single column [0;1]") {
    const DenseMatrix m{{0}, {1}};
    const QrFactors f = qr_factor(m);
    CHECK(std::abs(f.r(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(f.q(0, 0)) < 1e-15);
    CHECK(std::abs(f.q(1, 0)) == doctest::Approx(1.0));
  }

  TEST_CASE("random 5x3: orthonormal Q and small reconstruction error") {
    std::mt19937_64 rng(11);
    const auto m = testutil::random_matrix(5, 3, rng);
    const QrFactors f = qr_factor(m);
    const auto qhq = testutil::naive_mul(f.q.adjoint(), f.q);
    CHECK(fro(testutil::diff(qhq, DenseMatrix::identity(3))) <= 1e-13);
    CHECK(fro(testutil::diff(testutil::naive_mul(f.q, f.r), m)) <= 1e-12 * fro(m));
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = j + 1; i < 3; ++i) CHECK(f.r(i, j) == Scalar{});
  }

  TEST_CASE("wide input is rejected") {
    CHECK_THROWS_AS(qr_factor(DenseMatrix(2, 3)), DimensionError);
  }
}

TEST_SUITE("solve_upper_triangular") {
  TEST_CASE("identity returns c") {
    const DenseVector c{3.0, -1.0};
    CHECK(solve_upper_triangular(DenseMatrix::identity(2), c) == c);
  }

  TEST_CASE("two-by-two hand solve") {
    const DenseVector y =
        solve_upper_triangular(DenseMatrix{{2, 1}, {0, 4}}, DenseVector{4.0, 8.0});
    CHECK(is_close(y[0], 1.0, 1e-15));
    CHECK(is_close(y[1], 2.0, 1e-15));
  }

  TEST_CASE("round trip through QR recovers x") {
    std::mt19937_64 rng(5);
    const auto m = testutil::random_matrix(8, 5, rng);
    const auto xs = testutil::random_vector(5, rng);
    const QrFactors f = qr_factor(m);
    const DenseVector c = testutil::naive_mul(f.q.adjoint(), testutil::naive_mul(m, xs));
    const DenseVector x = solve_upper_triangular(f.r, c);
    CHECK(nrm(testutil::diff(x, xs)) <= 1e-10 * nrm(xs));
  }

  TEST_CASE("zero diagonal reports the index") {
    try {
      solve_upper_triangular(DenseMatrix{{1, 1}, {0, 0}}, DenseVector{1.0, 1.0});
      FAIL("expected RankDeficientError");
    } catch (const RankDeficientError& e) {
      CHECK(e.index() == 1);
    }
  }
}

TEST_SUITE("least_squares") {
  TEST_CASE("consistent tall system is solved exactly") {
    const DenseMatrix m{{1, 0}, {0, 1}, {1, 1}};
    const auto r = least_squares(m, DenseVector{1.0, 2.0, 3.0});
    CHECK(r.rank == 2);
    CHECK(r.residual < 1e-14);
    CHECK(is_close(r.y[0], 1.0, 1e-14));
    CHECK(is_close(r.y[1], 2.0, 1e-14));
  }

  TEST_CASE("rank deficient columns are truncated") {
    const DenseMatrix m{{1, 2}, {1, 2}, {0, 0}};
    const auto r = least_squares(m, DenseVector{1.0, 3.0, 0.0});
    CHECK(r.rank == 1);
    CHECK(r.y[1] == Scalar{});
    CHECK(r.residual == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_SUITE("hessenberg_eig") {
  TEST_CASE("diagonal matrix") {
    const DenseMatrix h{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}};
    const auto pairs = hessenberg_eig(h);
    REQUIRE(pairs.size() == 3);
    std::vector<double> values;
    for (const auto& p : pairs) {
      values.push_back(p.value.real());
      CHECK(std::abs(p.value.imag()) < 1e-14);
      // eigenvector is a coordinate axis
      int big = 0;
      for (std::size_t i = 0; i < 3; ++i) big += std::abs(p.vector[i]) > 1 - 1e-12;
      CHECK(big == 1);
    }
    std::sort(values.begin(), values.end());
    CHECK(values[0] == doctest::Approx(1.0));
    CHECK(values[1] == doctest::Approx(2.0));
    CHECK(values[2] == doctest::Approx(3.0));
  }

  TEST_CASE("Jordan block returns residual-satisfying pairs") {
    const DenseMatrix h{{0, 1}, {0, 0}};
    const auto pairs = hessenberg_eig(h);
    REQUIRE(pairs.size() == 2);
    for (const auto& p : pairs) {
      CHECK(std::abs(p.value) < 1e-7);
      CHECK(nrm(p.vector) == doctest::Approx(1.0));
      const DenseVector hy = testutil::naive_mul(h, p.vector);
      CHECK(nrm(testutil::diff(hy, p.value * p.vector)) < 1e-7);
    }
  }

  TEST_CASE("companion matrix of x^3 - 6x^2 + 11x - 6") {
    const DenseMatrix h{{6, -11, 6}, {1, 0, 0}, {0, 1, 0}};
    const auto pairs = hessenberg_eig(h);
    std::vector<double> values;
    for (const auto& p : pairs) {
      values.push_back(p.value.real());
      CHECK(std::abs(p.value.imag()) < 1e-10);
      CHECK(p.residual < 1e-8 * fro(h));
    }
    std::sort(values.begin(), values.end());
    CHECK(std::abs(values[0] - 1.0) < 1e-10);
    CHECK(std::abs(values[1] - 2.0) < 1e-10);
    CHECK(std::abs(values[2] - 3.0) < 1e-10);
  }

  TEST_CASE("real matrix with complex eigenvalues") {
    const DenseMatrix h{{0, -1}, {1, 0}};
    const auto pairs = hessenberg_eig(h);
    REQUIRE(pairs.size() == 2);
    for (const auto& p : pairs) {
      CHECK(std::abs(std::abs(p.value.imag()) - 1.0) < 1e-12);
      CHECK(p.residual < 1e-10);
    }
  }

  TEST_CASE("random Hessenberg: residuals small") {
    std::mt19937_64 rng(19);
    auto h = testutil::random_matrix(12, 12, rng);
    for (std::size_t j = 0; j < 12; ++j)
      for (std::size_t i = j + 2; i < 12; ++i) h(i, j) = 0.0;
    for (const auto& p : hessenberg_eig(h)) CHECK(p.residual <= 1e-8 * fro(h));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(hessenberg_eig(DenseMatrix(2, 3)), DimensionError);
    CHECK_THROWS_AS(hessenberg_eig(DenseMatrix{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}}),
                    DimensionError);
    EigOptions small;
    small.max_dim = 2;
    CHECK_THROWS_AS(hessenberg_eig(DenseMatrix::identity(3), small), DimensionError);
    DenseMatrix bad = DenseMatrix::identity(2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(hessenberg_eig(bad));
  }
}

TEST_SUITE("rank_of") {
  TEST_CASE("hand cases") {
    CHECK(rank_of(DenseMatrix(3, 3), 1e-10) == 0);
    CHECK(rank_of(DenseMatrix::identity(4), 1e-10) == 4);
    CHECK(rank_of(example4(), 1e-10) == 3);
  }

  TEST_CASE("pivot columns index the original matrix") {
    const DenseMatrix m{{0, 0, 1}, {0, 0, 2}, {0, 0, 3}};
    const auto cols = pivot_columns(m, 1e-12);
    REQUIRE(cols.size() == 1);
    CHECK(cols[0] == 2);
  }
}

TEST_SUITE("finiteness") {
  TEST_CASE("require_finite names the offender") {
    DenseVector v{1.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(require_finite(v, "b"), NonFiniteError);
    CHECK_NOTHROW(require_finite(DenseVector{1.0}, "b"));
  }
}
