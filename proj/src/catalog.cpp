#include "fastmm/catalog.hpp"

#include <sstream>
#include <stdexcept>

namespace fastmm::catalog {
namespace {

using Coeffs = std::vector<std::vector<int>>;

Matrix<Rational> from_rows(const Coeffs& rows) {
  const std::size_t r = rows.size(), c = rows.front().size();
  Matrix<Rational> m = Matrix<Rational>::zeros(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

BilinearAlgorithm finish(BilinearAlgorithm alg) {
  alg.check_consistent();
  return require_verified(alg);
}

}  // namespace

BilinearAlgorithm strassen() {
  // Entries ordered (11, 12, 21, 22) for a, b and c.
  BilinearAlgorithm alg;
  alg.name = "strassen";
  alg.shape = MMShape{2, 2, 2};
  alg.U = from_rows({
      {1, 0, 0, 1},   // p1: a11 + a22
      {0, 0, 1, 1},   // p2: a21 + a22
      {1, 0, 0, 0},   // p3: a11
      {-1, 0, 1, 0},  // p4: a21 - a11
      {1, 1, 0, 0},   // p5: a11 + a12
      {0, 0, 0, 1},   // p6: a22
      {0, 1, 0, -1},  // p7: a12 - a22
  });
  alg.V = from_rows({
      {1, 0, 0, 1},   // b11 + b22
      {1, 0, 0, 0},   // b11
      {0, 1, 0, -1},  // b12 - b22
      {1, 1, 0, 0},   // b11 + b12
      {0, 0, 0, 1},   // b22
      {-1, 0, 1, 0},  // b21 - b11
      {0, 0, 1, 1},   // b21 + b22
  });
  alg.W = from_rows({
      {1, 0, 0, 0, -1, 1, 1},  // c11 = p1 + p6 + p7 - p5
      {0, 0, 1, 0, 1, 0, 0},   // c12 = p3 + p5
      {0, 1, 0, 0, 0, 1, 0},   // c21 = p2 + p6
      {1, -1, 1, 1, 0, 0, 0},  // c22 = p1 + p3 + p4 - p2
  });
  return finish(std::move(alg));
}

BilinearAlgorithm winograd_mm2() {
  using Step = LinearProgram::Step;
  EvaluationSchedule s;
  // s1 = a21 + a22, s2 = s1 - a11, s3 = a11 - a21, s4 = a12 - s2
  s.a_forms.inputs = 4;
  s.a_forms.steps = {Step{2, 3, false}, Step{4, 0, true}, Step{0, 2, true}, Step{1, 5, true}};
  s.a_forms.outputs = {0, 1, 7, 3, 4, 5, 6};
  // t1 = b12 - b11, t2 = b22 - t1, t3 = b22 - b12, t4 = t2 - b21
  s.b_forms.inputs = 4;
  s.b_forms.steps = {Step{1, 0, true}, Step{3, 4, true}, Step{3, 1, true}, Step{5, 2, true}};
  s.b_forms.outputs = {0, 2, 3, 7, 4, 5, 6};
  // m1..m7 = a11 b11, a12 b21, s4 b22, a22 t4, s1 t1, s2 t2, s3 t3
  // u1 = m1 + m2, u2 = m1 + m6, u3 = u2 + m7, u4 = u2 + m5,
  // u5 = u4 + m3, u6 = u3 - m4, u7 = u3 + m5
  s.combine.inputs = 7;
  s.combine.steps = {Step{0, 1, false},  Step{0, 5, false}, Step{8, 6, false}, Step{8, 4, false},
                     Step{10, 2, false}, Step{9, 3, true},  Step{9, 4, false}};
  s.combine.outputs = {7, 11, 12, 13};

  BilinearAlgorithm alg;
  alg.name = "winograd";
  alg.shape = MMShape{2, 2, 2};
  alg.U = s.a_forms.coefficients();
  alg.V = s.b_forms.coefficients();
  alg.W = s.combine.coefficients();
  alg.schedule = std::move(s);
  return finish(std::move(alg));
}

TargetTensor complex_mult_target() {
  // c0 = a0 b0 - a1 b1 (real part), c1 = a0 b1 + a1 b0 (imaginary part)
  TargetTensor t(2, 2, 2);
  t.set({0, 0, 0}, 1);
  t.set({1, 1, 0}, -1);
  t.set({0, 1, 1}, 1);
  t.set({1, 0, 1}, 1);
  return t;
}

BilinearAlgorithm complex_mult() {
  BilinearAlgorithm alg;
  alg.name = "complex_mult";
  alg.problem = complex_mult_target();
  alg.U = from_rows({{1, 0}, {0, 1}, {1, 1}});
  alg.V = from_rows({{1, 0}, {0, 1}, {1, 1}});
  alg.W = from_rows({{1, -1, 0}, {-1, -1, 1}});
  return finish(std::move(alg));
}

BilinearAlgorithm straightforward(std::size_t m, std::size_t k, std::size_t n) {
  if (m == 0 || k == 0 || n == 0) throw DimensionError("straightforward: dimensions must be positive");
  const MMShape s{m, k, n};
  const std::size_t r = s.volume();
  BilinearAlgorithm alg;
  alg.name = "straightforward" + s.str();
  alg.shape = s;
  alg.U = Matrix<Rational>::zeros(r, s.a_size());
  alg.V = Matrix<Rational>::zeros(r, s.b_size());
  alg.W = Matrix<Rational>::zeros(s.c_size(), r);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t h = 0; h < n; ++h) {
        const std::size_t q = (i * k + j) * n + h;
        alg.U(q, i * k + j) = 1;
        alg.V(q, j * n + h) = 1;
        alg.W(i * n + h, q) = 1;
      }
  return finish(std::move(alg));
}

BilinearAlgorithm by_name(const std::string& name) {
  if (name == "strassen") return strassen();
  if (name == "winograd" || name == "winograd_mm2") return winograd_mm2();
  if (name == "complex_mult") return complex_mult();
  const std::string prefix = "straightforward:";
  if (name.rfind(prefix, 0) == 0) {
    std::istringstream is(name.substr(prefix.size()));
    std::size_t m = 0, k = 0, n = 0;
    char c1 = 0, c2 = 0;
    if (is >> m >> c1 >> k >> c2 >> n && c1 == ',' && c2 == ',') return straightforward(m, k, n);
  }
  throw std::invalid_argument("unknown builtin algorithm '" + name + "'");
}

std::vector<std::string> names() {
  return {"strassen", "winograd", "complex_mult", "straightforward:m,k,n"};
}

}  // namespace fastmm::catalog
