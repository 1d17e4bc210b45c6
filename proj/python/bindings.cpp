#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drazinkit/adgmres.hpp"
#include "drazinkit/oracle.hpp"
#include "drazinkit/problems.hpp"

namespace py = pybind11;
using namespace drazinkit;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto r = a.unchecked<2>();
  DenseMatrix m(r.shape(0), r.shape(1));
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    for (py::ssize_t j = 0; j < r.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

DenseVector to_vector(const CArray& a) {
  if (a.ndim() != 1) throw DimensionError("expected a 1-D array");
  const auto r = a.unchecked<1>();
  DenseVector v(r.shape(0));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) v[i] = r(i);
  return v;
}

py::array_t<std::complex<double>> from_matrix(const DenseMatrix& m) {
  py::array_t<std::complex<double>> out({m.rows(), m.cols()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return out;
}

py::array_t<std::complex<double>> from_vector(const DenseVector& v) {
  py::array_t<std::complex<double>> out(v.size());
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < v.size(); ++i) w(i) = v[i];
  return out;
}

py::dict history_dict(const RunHistory& h) {
  std::vector<std::size_t> cycle, matvecs;
  std::vector<double> semi, rel, wall;
  for (const auto& c : h.cycles) {
    cycle.push_back(c.cycle);
    semi.push_back(c.seminorm);
    rel.push_back(c.relative_seminorm);
    wall.push_back(c.wall_time);
    matvecs.push_back(c.matvecs);
  }
  py::dict d;
  d["x"] = from_vector(h.final_x);
  d["converged"] = h.converged;
  d["cycle"] = cycle;
  d["seminorm"] = semi;
  d["relative_seminorm"] = rel;
  d["wall_time_s"] = wall;
  d["matvecs"] = matvecs;
  return d;
}

SolverConfig make_config(std::size_t a, std::size_t m, double eps, std::size_t max_cycles) {
  SolverConfig c;
  c.index_a = a;
  c.restart_m = m;
  c.tol_eps = eps;
  c.max_cycles = max_cycles;
  return c;
}

DenseVector initial(const std::optional<CArray>& x0, std::size_t n) {
  return x0 ? to_vector(*x0) : DenseVector(n);
}

}  // namespace

PYBIND11_MODULE(_drazinkit, m) {
  m.doc() = "Drazin-inverse solutions by restarted DGMRES and ADGMRES";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<AxiomError>(m, "AxiomError", base.ptr());
  py::register_exception<NonFiniteError>(m, "NonFiniteError", base.ptr());

  m.def("index_of", [](const CArray& a) { return oracle::index_of(to_matrix(a)); },
        py::arg("A"), "ind(A): smallest a with rank(A^(a+1)) = rank(A^a)");

  m.def("drazin_inverse",
        [](const CArray& a) { return from_matrix(oracle::drazin_inverse(to_matrix(a)).drazin); },
        py::arg("A"), "Dense Drazin inverse A^D (checked against the three axioms)");

  m.def("drazin_solution",
        [](const CArray& a, const CArray& b) {
          return from_vector(oracle::drazin_solution(to_matrix(a), to_vector(b)));
        },
        py::arg("A"), py::arg("b"));

  m.def("example",
        [](const std::string& id) {
          const auto p = cli::generate_example(id);
          return py::make_tuple(from_matrix(p.A), from_vector(p.b), p.index_a);
        },
        py::arg("id"), "Built-in problem ex1..ex4 as (A, b, index)");

  m.def("dgmres",
        [](const CArray& a, const CArray& b, std::size_t index, std::size_t restart,
           double eps, std::size_t max_cycles, std::optional<CArray> x0) {
          const DenseMatrix am = to_matrix(a);
          const DenseVector bv = to_vector(b);
          const DenseVector xv = initial(x0, am.rows());
          RunHistory h;
          {
            py::gil_scoped_release release;
            h = dgmres_restarted(am, bv, xv, make_config(index, restart, eps, max_cycles));
          }
          return history_dict(h);
        },
        py::arg("A"), py::arg("b"), py::arg("index"), py::arg("m"), py::arg("eps") = 1e-12,
        py::arg("max_cycles") = 10000, py::arg("x0") = py::none());

  m.def("adgmres",
        [](const CArray& a, const CArray& b, std::size_t index, std::size_t restart,
           std::size_t k, double eps, std::size_t max_cycles, std::optional<CArray> x0) {
          const DenseMatrix am = to_matrix(a);
          const DenseVector bv = to_vector(b);
          const DenseVector xv = initial(x0, am.rows());
          RunHistory h;
          {
            py::gil_scoped_release release;
            h = adgmres_restarted(am, bv, xv, k, make_config(index, restart, eps, max_cycles));
          }
          return history_dict(h);
        },
        py::arg("A"), py::arg("b"), py::arg("index"), py::arg("m"), py::arg("k"),
        py::arg("eps") = 1e-12, py::arg("max_cycles") = 10000, py::arg("x0") = py::none());
}
