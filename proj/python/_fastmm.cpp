#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fastmm/aggregation.hpp"
#include "fastmm/apa.hpp"
#include "fastmm/binseg.hpp"
#include "fastmm/catalog.hpp"
#include "fastmm/history.hpp"
#include "fastmm/serialize.hpp"

namespace py = pybind11;
using namespace fastmm;

namespace {

// Python ints of any size pass through their decimal text.
Integer to_integer(const py::handle& h) { return Integer(py::str(h).cast<std::string>()); }
py::int_ to_py(const Integer& z) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(z.get_str().c_str(), nullptr, 10))); }

Matrix<Integer> to_matrix(const py::sequence& rows) {
  const std::size_t r = py::len(rows);
  if (r == 0) throw DimensionError("matrix has no rows");
  const std::size_t c = py::len(rows[0]);
  std::vector<Integer> e;
  e.reserve(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    py::sequence row = rows[i];
    if (py::len(row) != c) throw DimensionError("ragged matrix");
    for (std::size_t j = 0; j < c; ++j) e.push_back(to_integer(row[j]));
  }
  return Matrix<Integer>(r, c, std::move(e));
}

py::list from_matrix(const Matrix<Integer>& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(to_py(m(i, j)));
    rows.append(row);
  }
  return rows;
}

py::dict multiply_py(const py::sequence& a, const py::sequence& b, const std::string& alg, std::size_t cutoff) {
  const auto A = to_matrix(a), B = to_matrix(b);
  OpCounter ctr;
  const auto C = alg == "naive" ? mm_naive(A, B, ctr) : multiply(catalog::by_name(alg), A, B, cutoff, ctr);
  py::dict out;
  out["product"] = from_matrix(C);
  out["mults"] = ctr.mults;
  out["adds"] = ctr.adds;
  return out;
}

std::pair<bool, std::string> verify_text(const std::string& text) {
  const std::string kind = detect_format(text);
  if (kind == "bilinear") {
    auto r = verify(read_bilinear(text));
    return {r.ok, r.describe()};
  }
  if (kind == "trilinear") {
    auto r = verify(read_trilinear(text));
    return {r.ok, r.describe()};
  }
  auto r = apa_symbolic_check(read_apa(text));
  return {r.ok, r.ok ? "PASS" : r.message};
}

py::dict aggregate_py(const std::string& mode, std::size_t m, std::size_t k, std::size_t n) {
  py::dict out;
  if (mode == "two") {
    auto dec = aggregate_two(m, k, n);
    out["rank"] = dec.rank();
    out["aggregates"] = dec.aggregate_terms;
    out["text"] = write_trilinear(dec);
  } else if (mode == "three") {
    AggregateThreeReport rep;
    auto dec = aggregate_three(m, k, n, &rep);
    out["rank"] = dec.rank();
    out["aggregates"] = rep.aggregates;
    out["corrections"] = rep.corrections();
    out["text"] = write_trilinear(dec);
  } else if (mode == "apa") {
    auto alg = apa_aggregate(m, k, n);
    out["border_rank"] = alg.border_rank();
    out["degree"] = alg.degree;
    out["text"] = write_apa(alg);
  } else {
    throw std::invalid_argument("mode must be two, three or apa");
  }
  return out;
}

py::list apa_lift_py(std::size_t m, std::size_t k, std::size_t n, const py::sequence& a_blocks,
                     const py::sequence& b_blocks) {
  auto alg = apa_aggregate(m, k, n);
  std::vector<Matrix<Rational>> as, bs;
  auto widen = [](const Matrix<Integer>& x) {
    std::vector<Rational> e(x.entries().begin(), x.entries().end());
    return Matrix<Rational>(x.rows(), x.cols(), std::move(e));
  };
  for (auto blk : a_blocks) as.push_back(widen(to_matrix(py::reinterpret_borrow<py::sequence>(blk))));
  for (auto blk : b_blocks) bs.push_back(widen(to_matrix(py::reinterpret_borrow<py::sequence>(blk))));
  OpCounter ctr;
  auto out = apa_lift_exact(alg, pack_side(alg.layout, as, 0), pack_side(alg.layout, bs, 1), ctr);
  py::list products;
  for (const auto& c : unpack_products(alg.layout, out)) {
    Matrix<Integer> z(c.rows(), c.cols(), Integer(0));
    for (std::size_t t = 0; t < c.size(); ++t) z.entries()[t] = c.entries()[t].get_num();
    products.append(from_matrix(z));
  }
  return products;
}

}  // namespace

PYBIND11_MODULE(_fastmm, m) {
  m.doc() = "Fast matrix multiplication toolkit";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<VerificationError>(m, "VerificationError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("multiply", &multiply_py, py::arg("a"), py::arg("b"), py::arg("alg") = "strassen", py::arg("cutoff") = 1,
        "Exact integer product with operation counts. alg: naive, strassen or winograd.");
  m.def("builtins", &catalog::names);
  m.def("export_builtin", [](const std::string& name) { return write_bilinear(catalog::by_name(name)); });
  m.def("verify_builtin", [](const std::string& name) {
    auto r = verify(catalog::by_name(name));
    return std::make_pair(r.ok, r.describe());
  });
  m.def("verify_text", &verify_text, "Verify an algorithm given in the text format; returns (ok, message).");
  m.def("aggregate", &aggregate_py, py::arg("mode"), py::arg("m"), py::arg("k"), py::arg("n"));
  m.def("apa_lift", &apa_lift_py, py::arg("m"), py::arg("k"), py::arg("n"), py::arg("a_blocks"), py::arg("b_blocks"),
        "Exact disjoint products [AB, UV] recovered from the APA aggregation.");
  m.def("exponent_from_rank", &exponent_from_rank, py::arg("m"), py::arg("k"), py::arg("n"), py::arg("rank"));
  m.def("apa_exponent", &apa_exponent, py::arg("m"), py::arg("k"), py::arg("n"));

  m.def("binseg_inner", [](const std::vector<binseg::Digit>& u, const std::vector<binseg::Digit>& v, std::size_t g,
                           std::size_t h) { return binseg::inner_product(u, v, g, h); });
  m.def("binseg_sum", [](const std::vector<binseg::Digit>& v, std::size_t h) { return binseg::sum(v, h); });
  m.def("binseg_poly_mult", [](const std::vector<binseg::Digit>& p, const std::vector<binseg::Digit>& q,
                               std::size_t bound) { return binseg::poly_mult(p, q, bound); });

  m.def("history", [] {
    py::list rows;
    for (const auto& r : exponent_history()) rows.append(py::make_tuple(r.table, r.scope, r.exponent, r.citation, r.year));
    return rows;
  });
}
