#include "drazinkit/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "drazinkit/oracle.hpp"

namespace drazinkit::cli {

namespace {

DenseMatrix jordan_example() {
  constexpr std::size_t n = 12;
  const double diag[n] = {1, 1, 1, 3, 3, 3, 7, 8, 9, 9, 0, 0};
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = diag[i];
  // Superdiagonal ones of the Jordan blocks (0-based row, col).
  const std::pair<std::size_t, std::size_t> ones[] = {
      {0, 1}, {1, 2}, {3, 4}, {4, 5}, {8, 9}, {10, 11}};
  for (const auto& [i, j] : ones) a(i, j) = 1.0;
  return a;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Problem generate_example(std::string_view id) {
  Problem p;
  p.name = std::string(id);
  if (id == "ex1" || id == "ex2" || id == "ex3") {
    p.A = jordan_example();
    if (id == "ex2") p.A(6, 6) = 1000.0;
    if (id == "ex3") p.A(6, 6) = 0.001;
    p.b = DenseVector(12, 1.0);
    p.index_a = 2;
    return p;
  }
  if (id == "ex4") {
    p.A = DenseMatrix{{1, 1, 1, 2}, {0, 1, 3, 4}, {0, 0, 1, 1}, {0, 0, 0, 0}};
    p.b = DenseVector{-4.0, 7.0, 1.0, 0.0};
    p.index_a = 1;
    return p;
  }
  throw UsageError("unknown example '" + std::string(id) +
                   "' (expected ex1, ex2, ex3 or ex4)");
}

DenseMatrix apply_similarity(const DenseMatrix& a, std::uint64_t seed) {
  const std::size_t n = a.rows();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  DenseMatrix s = DenseMatrix::identity(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) s(i, j) = dist(rng);
  // S is unit lower triangular, so its {1}-inverse is its inverse.
  const DenseMatrix s_inv = oracle::one_inverse(s);
  return matmul(s, matmul(a, s_inv));
}

DenseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
  if (format != "coordinate" && format != "array")
    throw ParseError("unsupported format '" + format + "'", lineno);
  if (field == "pattern") throw ParseError("pattern matrices are not supported", lineno);
  if (field != "real" && field != "integer" && field != "complex" && field != "double")
    throw ParseError("unsupported field '" + field + "'", lineno);
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "skew-symmetric" && symmetry != "hermitian")
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  const bool complex = field == "complex";
  const bool coordinate = format == "coordinate";

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) throw ParseError("missing size line", lineno + 1);
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (coordinate) size_line >> nnz;
  if (!size_line || rows < 1 || cols < 1 || nnz < 0)
    throw ParseError("malformed size line", lineno);
  if (symmetry != "general" && rows != cols)
    throw ParseError("symmetric storage requires a square matrix", lineno);

  DenseMatrix a(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  auto place = [&](std::size_t i, std::size_t j, Scalar v) {
    a(i, j) = v;
    if (i == j) return;
    if (symmetry == "symmetric") a(j, i) = v;
    if (symmetry == "skew-symmetric") a(j, i) = -v;
    if (symmetry == "hermitian") a(j, i) = std::conj(v);
  };
  auto read_value = [&](std::istringstream& ss) {
    double re = 0.0, im = 0.0;
    ss >> re;
    if (complex) ss >> im;
    if (!ss) throw ParseError("malformed value", lineno);
    return Scalar(re, im);
  };

  if (coordinate) {
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(line))
        throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                             std::to_string(e),
                         lineno + 1);
      std::istringstream ss(line);
      long long i = 0, j = 0;
      ss >> i >> j;
      if (!ss) throw ParseError("malformed entry indices", lineno);
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError("entry index out of range", lineno);
      place(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
            read_value(ss));
    }
  } else {
    const bool general = symmetry == "general";
    for (long long j = 0; j < cols; ++j) {
      const long long first = general ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (long long i = first; i < rows; ++i) {
        if (!next_data_line(line)) throw ParseError("too few array values", lineno + 1);
        std::istringstream ss(line);
        place(static_cast<std::size_t>(i), static_cast<std::size_t>(j), read_value(ss));
      }
    }
  }
  return a;
}

DenseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open matrix file '" + path.string() + "'");
  return read_matrix_market(in);
}

DenseVector load_vector(const std::filesystem::path& path) {
  const DenseMatrix m = load_matrix_market(path);
  if (m.cols() == 1) return m.column(0);
  if (m.rows() == 1) {
    DenseVector v(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(0, j);
    return v;
  }
  throw UsageError("vector file '" + path.string() + "' is not n x 1 or 1 x n");
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
  const bool complex = std::any_of(a.data().begin(), a.data().end(),
                                   [](const Scalar& v) { return v.imag() != 0.0; });
  out << "%%MatrixMarket matrix array " << (complex ? "complex" : "real")
      << " general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  char buf[64];
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (complex) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g", a(i, j).real(), a(i, j).imag());
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", a(i, j).real());
      }
      out << buf << '\n';
    }
}

}  // namespace drazinkit::cli
