#include "drazinkit/dgmres.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace drazinkit {

void SolverConfig::validate() const {
  if (restart_m <= index_a)
    throw ConfigError("restart size m=" + std::to_string(restart_m) +
                      " must exceed the index a=" + std::to_string(index_a));
  if (!(tol_eps > 0.0)) throw ConfigError("tolerance eps must be positive");
  if (!(breakdown_tol >= 0.0)) throw ConfigError("breakdown_tol must be >= 0");
}

KrylovBasis build_krylov(const DenseMatrix& a, const DenseVector& seed,
                         std::size_t steps, const SolverConfig& cfg) {
  if (steps == 0) throw ConfigError("build_krylov: steps must be >= 1");
  if (seed.size() != a.cols()) throw DimensionError("build_krylov: seed size mismatch");
  const double beta = norm2(seed);
  if (beta == 0.0) throw ZeroSeedError();

  KrylovBasis kb;
  kb.V.reserve(steps + 1);
  kb.V.push_back((1.0 / beta) * seed);
  DenseMatrix h(steps + 1, steps);

  for (std::size_t j = 0; j < steps; ++j) {
    OrthoResult o = mgs_orthogonalize(kb.V, matvec(a, kb.V[j]), cfg.breakdown_tol);
    for (std::size_t i = 0; i <= j; ++i) h(i, j) = o.coeffs[i];
    if (o.breakdown()) {
      kb.breakdown_at = j + 1;
      kb.Hbar = h.block(0, 0, j + 1, j + 1);
      return kb;
    }
    h(j + 1, j) = o.hnext;
    kb.V.push_back(std::move(*o.vnext));
  }
  kb.Hbar = std::move(h);
  return kb;
}

DenseMatrix stacked_hessenberg(const DenseMatrix& hbar_full, std::size_t m,
                               std::size_t a) {
  if (m <= a)
    throw ConfigError("stacked_hessenberg: m=" + std::to_string(m) +
                      " must exceed a=" + std::to_string(a));
  const std::size_t rows = hbar_full.rows();
  const std::size_t cols = hbar_full.cols();
  const bool truncated = rows == cols;
  if (!truncated && (rows != cols + 1 || cols < m))
    throw DimensionError("stacked_hessenberg: expected an (m+1) x m Hessenberg");

  auto factor = [&](std::size_t k) {
    return hbar_full.block(0, 0, std::min(k + 1, rows), std::min(k, cols));
  };
  const std::size_t p = std::min(m - a, cols);
  DenseMatrix product = factor(p);
  for (std::size_t k = p + 1; k <= p + a; ++k) product = matmul(factor(k), product);
  return product;
}

double drazin_seminorm(const DenseMatrix& a, const DenseVector& b,
                       const DenseVector& x, std::size_t index_a) {
  return norm2(power_apply(a, index_a, b - matvec(a, x)));
}

CycleResult dgmres_cycle(const DenseMatrix& a, const DenseVector& b,
                         const DenseVector& x0, const SolverConfig& cfg) {
  detail::check_problem(a, b, x0, cfg);
  const std::size_t idx = cfg.index_a;
  const std::size_t m = cfg.restart_m;

  CycleResult out;
  const DenseVector seed = power_apply(a, idx, b - matvec(a, x0));
  out.matvecs = idx + 1;
  const double beta = norm2(seed);
  if (beta == 0.0) {
    out.x_new = x0;
    return out;
  }

  const KrylovBasis kb = build_krylov(a, seed, m, cfg);
  out.matvecs += kb.width();
  out.breakdown = kb.breakdown_at.has_value();

  const DenseMatrix hhat = stacked_hessenberg(kb.Hbar, m, idx);
  DenseVector rhs(hhat.rows());
  rhs[0] = beta;
  const LeastSquaresResult ls = least_squares(hhat, rhs, cfg.ls_singular_tol);

  out.x_new = x0;
  for (std::size_t i = 0; i < ls.rank; ++i) {
    const Scalar yi = ls.y[i];
    auto vi = kb.V[i].span();
    for (std::size_t r = 0; r < out.x_new.size(); ++r) out.x_new[r] += yi * vi[r];
  }
  out.basis_dim = ls.rank;
  out.ls_residual = ls.residual;
  out.seminorm = drazin_seminorm(a, b, out.x_new, idx);
  out.matvecs += idx + 1;
  return out;
}

RunHistory dgmres_restarted(const DenseMatrix& a, const DenseVector& b,
                            const DenseVector& x0, const SolverConfig& cfg) {
  return detail::restart_loop(a, b, x0, cfg, [&](const DenseVector& x) {
    return dgmres_cycle(a, b, x, cfg);
  });
}

namespace detail {

void check_problem(const DenseMatrix& a, const DenseVector& b,
                   const DenseVector& x0, const SolverConfig& cfg) {
  if (!a.square() || a.rows() == 0)
    throw DimensionError("solver: A must be square and non-empty");
  if (b.size() != a.rows()) throw DimensionError("solver: b has the wrong size");
  if (x0.size() != a.rows()) throw DimensionError("solver: x0 has the wrong size");
  cfg.validate();
  require_finite(a, "A");
  require_finite(b, "b");
  require_finite(x0, "x0");
}

RunHistory restart_loop(const DenseMatrix& a, const DenseVector& b,
                        const DenseVector& x0, const SolverConfig& cfg,
                        const CycleStep& step) {
  check_problem(a, b, x0, cfg);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };
  const double denom = norm2(power_apply(a, cfg.index_a, b));
  auto relative = [&](double s) { return denom > 0.0 ? s / denom : s; };

  RunHistory h;
  h.final_x = x0;
  std::size_t matvecs = cfg.index_a + 1;
  const double s0 = drazin_seminorm(a, b, x0, cfg.index_a);
  h.cycles.push_back({0, s0, relative(s0), elapsed(), matvecs, false});
  h.converged = relative(s0) < cfg.tol_eps;

  for (std::size_t c = 1; !h.converged && c <= cfg.max_cycles; ++c) {
    CycleResult r = step(h.final_x);
    matvecs += r.matvecs;
    h.final_x = std::move(r.x_new);
    h.cycles.push_back(
        {c, r.seminorm, relative(r.seminorm), elapsed(), matvecs, r.fallback});
    h.converged = relative(r.seminorm) < cfg.tol_eps;
  }
  return h;
}

}  // namespace detail

}  // namespace drazinkit
