#pragma once

// Problem ingestion: built-in test problems and Matrix Market files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "drazinkit/densela.hpp"

namespace drazinkit::cli {

struct Problem {
  std::string name;
  DenseMatrix A;
  DenseVector b;
  std::size_t index_a = 0;
};

/// Built-in problems:
///   ex1  12x12 Jordan matrix (blocks J3(1), J3(3), 7, 8, J2(9), J2(0)), b = ones
///   ex2  ex1 with entry (7,7) = 1000
///   ex3  ex1 with entry (7,7) = 0.001
///   ex4  4x4 upper triangular matrix with one zero row, b = (-4, 7, 1, 0)
/// Throws UsageError for any other id.
Problem generate_example(std::string_view id);

/// A <- S A S^{-1} with S unit lower triangular, entries drawn from a
/// seeded generator. Deterministic for a given seed.
DenseMatrix apply_similarity(const DenseMatrix& a, std::uint64_t seed);

/// Coordinate or array format; real, integer or complex field; general,
/// symmetric, skew-symmetric or hermitian. Pattern matrices are rejected.
DenseMatrix read_matrix_market(std::istream& in);
DenseMatrix load_matrix_market(const std::filesystem::path& path);

/// A Matrix Market file holding an n x 1 or 1 x n matrix.
DenseVector load_vector(const std::filesystem::path& path);

void write_matrix_market(std::ostream& out, const DenseMatrix& a);

}  // namespace drazinkit::cli
