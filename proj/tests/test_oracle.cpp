#include <cmath>
#include <random>

#include "doctest.h"
#include "drazinkit/oracle.hpp"
#include "drazinkit/problems.hpp"
#include "test_helpers.hpp"

using namespace drazinkit;
using testutil::diff;
using testutil::fro;
using testutil::naive_mul;
using testutil::nrm;

TEST_SUITE("index_of") {
  TEST_CASE("nonsingular is index 0") {
    CHECK(oracle::index_of(DenseMatrix{{2, 1}, {0, 3}}) == 0);
  }

  TEST_CASE("built-in examples") {
    CHECK(oracle::index_of(cli::generate_example("ex1").A) == 2);
    CHECK(oracle::index_of(cli::generate_example("ex2").A) == 2);
    CHECK(oracle::index_of(cli::generate_example("ex3").A) == 2);
    CHECK(oracle::index_of(cli::generate_example("ex4").A) == 1);
  }

  TEST_CASE("nilpotent Jordan block of size 4") {
    DenseMatrix n(4, 4);
    for (std::size_t i = 0; i < 3; ++i) n(i, i + 1) = 1.0;
    const auto info = oracle::index_info(n);
    CHECK(info.index == 4);
    CHECK(info.core_rank == 0);
  }

  TEST_CASE("zero matrix is index 1") { CHECK(oracle::index_of(DenseMatrix(3, 3)) == 1); }

  TEST_CASE("non-square rejected") {
    CHECK_THROWS_AS(oracle::index_of(DenseMatrix(2, 3)), DimensionError);
  }

  TEST_CASE("planted structure under a reflector") {
    std::mt19937_64 rng(21);
    for (std::size_t idx = 1; idx <= 3; ++idx) {
      const auto p = testutil::planted_singular(10, idx, rng);
      CHECK(oracle::index_of(p.A) == idx);
    }
  }
}

TEST_SUITE("one_inverse") {
  TEST_CASE("nonsingular gives the inverse") {
    const DenseMatrix b{{2, 1}, {1, 1}};
    const DenseMatrix g = oracle::one_inverse(b);
    CHECK(fro(diff(naive_mul(b, g), DenseMatrix::identity(2))) < 1e-14);
  }

  TEST_CASE("zero gives zero") { CHECK(oracle::one_inverse(DenseMatrix(2, 2)) == DenseMatrix(2, 2)); }

  TEST_CASE("diag(2, 0)") {
    const DenseMatrix b{{2, 0}, {0, 0}};
    const DenseMatrix g = oracle::one_inverse(b);
    CHECK(std::abs(g(0, 0) - 0.5) < 1e-15);
    CHECK(fro(diff(naive_mul(b, naive_mul(g, b)), b)) < 1e-15);
  }

  TEST_CASE("random rank-deficient B satisfies BGB = B") {
    std::mt19937_64 rng(4);
    const auto l = testutil::random_matrix(7, 3, rng);
    const auto r = testutil::random_matrix(3, 7, rng);
    const DenseMatrix b = naive_mul(l, r);
    const DenseMatrix g = oracle::one_inverse(b);
    CHECK(fro(diff(naive_mul(b, naive_mul(g, b)), b)) <= 1e-10 * fro(b));
    const DenseMatrix g3 = oracle::one_inverse_with_rank(b, 3);
    CHECK(fro(diff(naive_mul(b, naive_mul(g3, b)), b)) <= 1e-10 * fro(b));
  }
}

TEST_SUITE("drazin_inverse") {
  TEST_CASE("nonsingular: A A^D = I") {
    const DenseMatrix a{{4, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    const auto f = oracle::drazin_inverse(a);
    CHECK(f.index_a == 0);
    CHECK(fro(diff(naive_mul(a, f.drazin), DenseMatrix::identity(3))) < 1e-12);
  }

  TEST_CASE("nilpotent: A^D = 0") {
    const auto f = oracle::drazin_inverse(DenseMatrix{{0, 1}, {0, 0}});
    CHECK(fro(f.drazin) == 0.0);
  }

  TEST_CASE("example 1: Jordan-block inverses and a zero nilpotent block") {
    const auto p = cli::generate_example("ex1");
    const auto f = oracle::drazin_inverse(p.A);
    CHECK(std::abs(f.drazin(6, 6) - 1.0 / 7.0) < 1e-13);
    CHECK(std::abs(f.drazin(7, 7) - 1.0 / 8.0) < 1e-13);
    // J3(1)^{-1} = [[1,-1,1],[0,1,-1],[0,0,1]]
    CHECK(std::abs(f.drazin(0, 2) - 1.0) < 1e-12);
    CHECK(std::abs(f.drazin(0, 1) + 1.0) < 1e-12);
    // J2(9)^{-1} = [[1/9, -1/81],[0, 1/9]]
    CHECK(std::abs(f.drazin(8, 9) + 1.0 / 81.0) < 1e-13);
    for (std::size_t i = 10; i < 12; ++i)
      for (std::size_t j = 0; j < 12; ++j) {
        CHECK(std::abs(f.drazin(i, j)) < 1e-13);
        CHECK(std::abs(f.drazin(j, i)) < 1e-13);
      }
  }

  TEST_CASE("planted matrices: exact Drazin inverse recovered") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = testutil::planted_singular(8 + trial, 1 + trial % 3, rng);
      const auto f = oracle::drazin_inverse(p.A);
      CHECK(f.index_a == p.index);
      CHECK(fro(diff(f.drazin, p.drazin)) <= 1e-8 * fro(p.drazin));
    }
  }

  TEST_CASE("l = a and l = a + 1 agree") {
    const auto a = cli::generate_example("ex4").A;
    const auto f1 = oracle::drazin_inverse(a);
    oracle::DrazinOptions opts;
    opts.power_l = f1.index_a + 1;
    const auto f2 = oracle::drazin_inverse(a, opts);
    CHECK(f2.power_l == 2);
    CHECK(fro(diff(f1.drazin, f2.drazin)) <= 1e-8 * fro(f1.drazin));
  }

  TEST_CASE("l below the index is a configuration error") {
    oracle::DrazinOptions opts;
    opts.power_l = 1;
    CHECK_THROWS_AS(oracle::drazin_inverse(cli::generate_example("ex1").A, opts), ConfigError);
  }

  TEST_CASE("impossible axiom tolerance raises AxiomError with residuals") {
    std::mt19937_64 rng(5);
    const auto p = testutil::planted_singular(12, 2, rng);
    oracle::DrazinOptions opts;
    opts.axiom_tol = 0.0;
    try {
      oracle::drazin_inverse(p.A, opts);
      FAIL("expected AxiomError");
    } catch (const AxiomError& e) {
      CHECK(e.core() >= 0.0);
      CHECK(std::max({e.core(), e.reflexive(), e.commute()}) > 0.0);
    }
  }

  TEST_CASE("axiom residuals of a wrong X are large") {
    const auto a = cli::generate_example("ex4").A;
    const auto r = oracle::axiom_residuals(a, DenseMatrix::identity(4), 1);
    CHECK(r.worst() > 1e-3);
  }
}

TEST_SUITE("drazin_solution") {
  TEST_CASE("identity returns b") {
    const DenseVector b{1.0, -2.0, 3.0};
    CHECK(nrm(diff(oracle::drazin_solution(DenseMatrix::identity(3), b), b)) < 1e-15);
  }

  TEST_CASE("nilpotent returns zero") {
    const auto x = oracle::drazin_solution(DenseMatrix{{0, 1}, {0, 0}}, DenseVector{1.0, 1.0});
    CHECK(nrm(x) == 0.0);
  }

  TEST_CASE("example 4: A^2 x = A b and x in range(A)") {
    const auto p = cli::generate_example("ex4");
    const DenseVector x = oracle::drazin_solution(p.A, p.b);
    const DenseVector lhs = naive_mul(p.A, naive_mul(p.A, x));
    const DenseVector rhs = naive_mul(p.A, p.b);
    CHECK(nrm(diff(lhs, rhs)) <= 1e-12 * nrm(rhs));
    // x in range(A): the least-squares residual of A y = x vanishes. Range(A)
    // here is spanned by e1, e2, e3 (the last row of A is zero).
    CHECK(std::abs(x[3]) < 1e-13);
  }

  TEST_CASE("size mismatch rejected") {
    CHECK_THROWS_AS(oracle::drazin_solution(DenseMatrix::identity(3), DenseVector(2)),
                    DimensionError);
  }
}
