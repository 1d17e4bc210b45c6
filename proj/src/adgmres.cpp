#include "drazinkit/adgmres.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace drazinkit {

namespace {

void append_column(DenseMatrix& h, std::size_t col, const OrthoResult& o) {
  for (std::size_t i = 0; i < o.coeffs.size(); ++i) h(i, col) = o.coeffs[i];
  if (!o.breakdown()) h(o.coeffs.size(), col) = o.hnext;
}

}  // namespace

std::size_t AugmentedSystem::augmented() const noexcept {
  return static_cast<std::size_t>(
      std::count(active.begin() + static_cast<std::ptrdiff_t>(krylov_width),
                 active.end(), true));
}

RitzSet ritz_pairs(const KrylovBasis& basis, std::size_t k,
                   const SolverConfig& cfg, double a_norm) {
  const std::size_t p = basis.width();
  if (k == 0) return {};
  if (p < k)
    throw RitzError("ritz_pairs: Krylov width " + std::to_string(p) +
                    " is smaller than k=" + std::to_string(k) +
                    "; increase m or decrease k");

  const DenseMatrix hsharp = basis.Hbar.block(0, 0, p, p);
  std::vector<EigenPair> pairs;
  try {
    pairs = hessenberg_eig(hsharp);
  } catch (const ConvergenceError& e) {
    throw RitzError(std::string("ritz_pairs: ") + e.what());
  }

  RitzSet out;
  const double cutoff = cfg.zero_ritz_tol * a_norm;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (std::abs(pairs[i].value) > cutoff)
      keep.push_back(i);
    else
      ++out.discarded_near_zero;
  }
  if (keep.size() < k)
    throw RitzError("ritz_pairs: only " + std::to_string(keep.size()) +
                    " nonzero Ritz values for k=" + std::to_string(k) +
                    "; increase m or decrease k");
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(pairs[x].value) < std::abs(pairs[y].value);
  });

  const std::size_t n = basis.V.front().size();
  for (std::size_t s = 0; s < k; ++s) {
    const EigenPair& ep = pairs[keep[s]];
    DenseVector z(n);
    for (std::size_t i = 0; i < p; ++i) {
      const Scalar yi = ep.vector[i];
      auto vi = basis.V[i].span();
      for (std::size_t r = 0; r < n; ++r) z[r] += yi * vi[r];
    }
    z *= 1.0 / norm2(z);
    out.values.push_back(ep.value);
    out.vectors.push_back(std::move(z));
    out.residuals.push_back(ep.residual);
  }
  return out;
}

AugmentedSystem augment_basis(const DenseMatrix& a, const KrylovBasis& basis,
                              const RitzSet& ritz, const SolverConfig& cfg) {
  const std::size_t p = basis.width();
  const std::size_t k = ritz.vectors.size();
  const std::size_t n = a.rows();

  AugmentedSystem sys;
  sys.krylov_width = p;
  sys.V.assign(basis.V.begin(), basis.V.end());
  sys.placeholder.assign(sys.V.size(), false);
  if (sys.V.size() == p) {  // Arnoldi broke down: v_{p+1} does not exist
    sys.V.emplace_back(n);
    sys.placeholder.push_back(true);
  }

  DenseMatrix h0(p + k + 1, p + k);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < basis.Hbar.rows(); ++i) h0(i, j) = basis.Hbar(i, j);

  sys.W = DenseMatrix(n, p + k);
  for (std::size_t j = 0; j < p; ++j)
    std::copy(basis.V[j].begin(), basis.V[j].end(), sys.W.col(j).begin());
  sys.active.assign(p + k, true);

  // Orthonormal basis of the active part of W, used to decide whether z_i
  // widens the search space.
  std::vector<DenseVector> span(basis.V.begin(), basis.V.begin() + p);
  std::size_t coeffs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const DenseVector& z = ritz.vectors[i];
    if (z.size() != n) throw DimensionError("augment_basis: Ritz vector size mismatch");
    const std::size_t col = p + i;
    std::copy(z.begin(), z.end(), sys.W.col(col).begin());

    OrthoResult widen = mgs_orthogonalize(span, z, cfg.augment_tol);
    sys.active[col] = !widen.breakdown();
    if (sys.active[col]) span.push_back(std::move(*widen.vnext));

    OrthoResult o = mgs_orthogonalize(sys.V, matvec(a, z), cfg.breakdown_tol);
    ++sys.matvecs;
    coeffs += o.coeffs.size() + 1;
    append_column(h0, col, o);
    if (o.breakdown()) {
      ++sys.skipped_columns;
      sys.V.emplace_back(n);
      sys.placeholder.push_back(true);
    } else {
      sys.V.push_back(std::move(*o.vnext));
      sys.placeholder.push_back(false);
    }
  }

  sys.new_coefficients.push_back(coeffs);
  sys.H_product = h0;
  sys.H_chain.push_back(std::move(h0));
  return sys;
}

AugmentedSystem build_h_chain(const DenseMatrix& a, AugmentedSystem sys,
                              std::size_t index_a, const SolverConfig& cfg) {
  if (sys.H_chain.empty()) throw ConfigError("build_h_chain: stage 0 missing");
  const std::size_t p = sys.krylov_width;
  const std::size_t k = sys.W.cols() - p;
  const std::size_t n = a.rows();

  for (std::size_t t = sys.H_chain.size(); t <= index_a; ++t) {
    const DenseMatrix& prev = sys.H_chain.back();
    const std::size_t keep = p + t;  // v_1 .. v_{p+t} survive unchanged
    DenseMatrix ht(p + k + t + 1, p + k + t);
    for (std::size_t j = 0; j + 1 < keep; ++j)
      for (std::size_t i = 0; i <= j + 1; ++i) ht(i, j) = prev(i, j);

    std::vector<DenseVector> next(sys.V.begin(), sys.V.begin() + keep);
    std::vector<bool> next_placeholder(sys.placeholder.begin(),
                                       sys.placeholder.begin() + keep);
    std::size_t coeffs = 0;
    for (std::size_t col = keep - 1; col < p + k + t; ++col) {
      DenseVector w(n);
      if (!sys.placeholder[col]) {
        w = matvec(a, sys.V[col]);
        ++sys.matvecs;
      }
      OrthoResult o = mgs_orthogonalize(next, std::move(w), cfg.breakdown_tol);
      coeffs += o.coeffs.size() + 1;
      append_column(ht, col, o);
      if (o.breakdown()) {
        ++sys.skipped_columns;
        next.emplace_back(n);
        next_placeholder.push_back(true);
      } else {
        next.push_back(std::move(*o.vnext));
        next_placeholder.push_back(false);
      }
    }

    sys.V = std::move(next);
    sys.placeholder = std::move(next_placeholder);
    sys.new_coefficients.push_back(coeffs);
    sys.H_product = matmul(ht, sys.H_product);
    sys.H_chain.push_back(std::move(ht));
  }
  return sys;
}

CycleResult minimize_augmented(const DenseMatrix& a, const DenseVector& b,
                               const DenseVector& x0, const AugmentedSystem& sys,
                               double beta, const SolverConfig& cfg) {
  const DenseMatrix& h = sys.H_product;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < h.cols(); ++j)
    if (sys.active[j]) cols.push_back(j);

  // Trailing rows that are zero in every active column carry no information.
  std::size_t rows = h.rows();
  while (rows > 1) {
    bool zero = true;
    for (std::size_t j : cols) zero = zero && h(rows - 1, j) == Scalar{};
    if (!zero) break;
    --rows;
  }
  rows = std::max(rows, cols.size());

  DenseMatrix m(rows, cols.size());
  for (std::size_t jj = 0; jj < cols.size(); ++jj)
    for (std::size_t i = 0; i < rows; ++i) m(i, jj) = h(i, cols[jj]);
  DenseVector rhs(rows);
  rhs[0] = beta;
  const LeastSquaresResult ls = least_squares(m, rhs, cfg.ls_singular_tol);

  CycleResult out;
  out.x_new = x0;
  for (std::size_t jj = 0; jj < ls.rank; ++jj) {
    const Scalar yj = ls.y[jj];
    auto wj = sys.W.col(cols[jj]);
    for (std::size_t r = 0; r < out.x_new.size(); ++r) out.x_new[r] += yj * wj[r];
  }
  out.basis_dim = ls.rank;
  out.ls_residual = ls.residual;
  out.augmented = sys.augmented();
  out.breakdown = sys.skipped_columns > 0;
  out.seminorm = drazin_seminorm(a, b, out.x_new, cfg.index_a);
  out.matvecs = cfg.index_a + 1;
  return out;
}

CycleResult adgmres_cycle(const DenseMatrix& a, const DenseVector& b,
                          const DenseVector& x0, std::size_t k,
                          const SolverConfig& cfg) {
  detail::check_problem(a, b, x0, cfg);
  const std::size_t idx = cfg.index_a;

  const DenseVector seed = power_apply(a, idx, b - matvec(a, x0));
  const double beta = norm2(seed);
  if (beta == 0.0) {
    CycleResult out;
    out.x_new = x0;
    out.matvecs = idx + 1;
    return out;
  }

  const KrylovBasis kb = build_krylov(a, seed, cfg.restart_m - idx, cfg);
  RitzSet ritz;
  try {
    ritz = ritz_pairs(kb, k, cfg, frobenius_norm(a));
  } catch (const RitzError&) {
    CycleResult out = dgmres_cycle(a, b, x0, cfg);
    out.fallback = true;
    out.matvecs += kb.width();
    return out;
  }

  AugmentedSystem sys = augment_basis(a, kb, ritz, cfg);
  sys = build_h_chain(a, std::move(sys), idx, cfg);
  CycleResult out = minimize_augmented(a, b, x0, sys, beta, cfg);
  out.matvecs += idx + 1 + kb.width() + sys.matvecs;
  out.ritz_values = ritz.values;
  return out;
}

RunHistory adgmres_restarted(const DenseMatrix& a, const DenseVector& b,
                             const DenseVector& x0, std::size_t k,
                             const SolverConfig& cfg) {
  return detail::restart_loop(a, b, x0, cfg, [&](const DenseVector& x) {
    return adgmres_cycle(a, b, x, k, cfg);
  });
}

}  // namespace drazinkit
