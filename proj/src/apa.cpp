#include "fastmm/apa.hpp"

#include <cmath>
#include <sstream>

namespace fastmm {

// ---------------------------------------------------------------------------
// LambdaPoly

void LambdaPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

LambdaPoly LambdaPoly::monomial(const Integer& c, std::size_t power) {
  std::vector<Integer> v(power + 1, Integer(0));
  v[power] = c;
  return LambdaPoly(std::move(v));
}

int LambdaPoly::valuation() const {
  for (std::size_t p = 0; p < coeffs_.size(); ++p)
    if (coeffs_[p] != 0) return static_cast<int>(p);
  return -1;
}

Integer LambdaPoly::coefficient(std::size_t power) const {
  return power < coeffs_.size() ? coeffs_[power] : Integer(0);
}

Rational LambdaPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += Rational(*it);
  }
  return acc;
}

double LambdaPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Integer(0));
  for (std::size_t p = 0; p < o.coeffs_.size(); ++p) coeffs_[p] += o.coeffs_[p];
  normalize();
  return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> out(a.coeffs_.size() + b.coeffs_.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return LambdaPoly(std::move(out));
}

std::string LambdaPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    if (coeffs_[p] == 0) continue;
    if (!first) os << (coeffs_[p] < 0 ? " - " : " + ");
    else if (coeffs_[p] < 0) os << "-";
    Integer mag = abs(coeffs_[p]);
    if (p == 0 || mag != 1) os << mag.get_str();
    if (p >= 1) os << "l";
    if (p >= 2) os << "^" << p;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// APAAlgorithm

void APAAlgorithm::check_consistent() const {
  const std::size_t r = U.rows();
  if (r == 0) throw DimensionError("APA algorithm '" + name + "' has no terms");
  if (V.rows() != r || W.cols() != r) throw DimensionError("APA algorithm '" + name + "': U, V, W rank mismatch");
  if (U.cols() != layout.dim_a() || V.cols() != layout.dim_b() || W.rows() != layout.dim_d())
    throw DimensionError("APA algorithm '" + name + "': coefficient matrices do not match the layout");
  if (degree < 0) throw DimensionError("APA algorithm '" + name + "': negative degree");
}

namespace {

Matrix<LambdaPoly> poly_zeros(std::size_t rows, std::size_t cols) { return Matrix<LambdaPoly>(rows, cols, LambdaPoly{}); }

LambdaPoly lam(long c, std::size_t power) { return LambdaPoly::monomial(Integer(c), power); }

}  // namespace

APAAlgorithm apa_aggregate(std::size_t m, std::size_t k, std::size_t n) {
  if (m == 0 || k == 0 || n == 0) throw DimensionError("apa_aggregate: dimensions must be positive");
  const MMShape s{m, k, n};
  APAAlgorithm alg;
  alg.name = "apa_aggregate" + s.str();
  alg.layout.problems = {s, s.rotated()};
  alg.scale = -2;
  alg.degree = 2;

  const std::size_t mk = m * k, kn = k * n, nm = n * m;
  auto a = [&](std::size_t i, std::size_t j) { return i * k + j; };
  auto u = [&](std::size_t j, std::size_t h) { return mk + j * n + h; };
  auto b = [&](std::size_t j, std::size_t h) { return j * n + h; };
  auto v = [&](std::size_t h, std::size_t i) { return kn + h * m + i; };
  auto d = [&](std::size_t h, std::size_t i) { return h * m + i; };
  auto w = [&](std::size_t i, std::size_t j) { return nm + i * k + j; };

  const std::size_t r = m * k * n + mk + kn;
  alg.U = poly_zeros(r, alg.layout.dim_a());
  alg.V = poly_zeros(r, alg.layout.dim_b());
  alg.W = poly_zeros(alg.layout.dim_d(), r);

  std::size_t q = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t h = 0; h < n; ++h, ++q) {
        alg.U(q, a(i, j)) = 1;
        alg.U(q, u(j, h)) = lam(1, 1);
        alg.V(q, b(j, h)) = 1;
        alg.V(q, v(h, i)) = lam(1, 1);
        alg.W(d(h, i), q) = lam(1, 2);
        alg.W(w(i, j), q) = 1;
      }
  // a_ij · Σ_h (b_jh + λ v_hi) · w_ij
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j, ++q) {
      alg.U(q, a(i, j)) = -1;
      for (std::size_t h = 0; h < n; ++h) {
        alg.V(q, b(j, h)) = 1;
        alg.V(q, v(h, i)) = lam(1, 1);
      }
      alg.W(w(i, j), q) = 1;
    }
  // λ u_jh · b_jh · Σ_i (λ² d_hi + w_ij)
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t h = 0; h < n; ++h, ++q) {
      alg.U(q, u(j, h)) = lam(-1, 1);
      alg.V(q, b(j, h)) = 1;
      for (std::size_t i = 0; i < m; ++i) {
        alg.W(d(h, i), q) = lam(1, 2);
        alg.W(w(i, j), q) = 1;
      }
    }
  alg.check_consistent();
  if (auto res = apa_symbolic_check(alg); !res)
    throw VerificationError("generated APA algorithm failed its symbolic check: " + res.message);
  return alg;
}

APAAlgorithm apa_from_bilinear(const BilinearAlgorithm& alg) {
  if (!alg.shape) throw DimensionError("apa_from_bilinear: algorithm is not a matrix multiplication");
  const MMShape s = *alg.shape;
  const std::size_t r = alg.rank();
  auto as_poly = [](const Rational& c) {
    if (c.get_den() != 1) throw CoefficientError("apa_from_bilinear: coefficient " + c.get_str() + " is not an integer");
    return LambdaPoly(std::vector<Integer>{c.get_num()});
  };
  APAAlgorithm out;
  out.name = alg.name;
  out.layout.problems = {s};
  out.U = poly_zeros(r, s.a_size());
  out.V = poly_zeros(r, s.b_size());
  out.W = poly_zeros(s.c_size(), r);
  for (std::size_t q = 0; q < r; ++q) {
    for (std::size_t t = 0; t < s.a_size(); ++t) out.U(q, t) = as_poly(alg.U(q, t));
    for (std::size_t t = 0; t < s.b_size(); ++t) out.V(q, t) = as_poly(alg.V(q, t));
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t h = 0; h < s.n; ++h) out.W(h * s.m + i, q) = as_poly(alg.W(i * s.n + h, q));
  }
  out.check_consistent();
  return out;
}

std::map<Index3, LambdaPoly> apa_expand(const APAAlgorithm& alg) {
  alg.check_consistent();
  std::map<Index3, LambdaPoly> acc;
  for (std::size_t q = 0; q < alg.border_rank(); ++q) {
    std::vector<std::pair<std::uint32_t, const LambdaPoly*>> us, vs, ws;
    for (std::size_t t = 0; t < alg.U.cols(); ++t)
      if (!alg.U(q, t).is_zero()) us.emplace_back(static_cast<std::uint32_t>(t), &alg.U(q, t));
    for (std::size_t t = 0; t < alg.V.cols(); ++t)
      if (!alg.V(q, t).is_zero()) vs.emplace_back(static_cast<std::uint32_t>(t), &alg.V(q, t));
    for (std::size_t t = 0; t < alg.W.rows(); ++t)
      if (!alg.W(t, q).is_zero()) ws.emplace_back(static_cast<std::uint32_t>(t), &alg.W(t, q));
    for (const auto& [ia, pa] : us)
      for (const auto& [ib, pb] : vs) {
        const LambdaPoly ab = *pa * *pb;
        for (const auto& [id, pd] : ws) acc[Index3{ia, ib, id}] += ab * *pd;
      }
  }
  std::map<Index3, LambdaPoly> out;
  for (auto& [idx, poly] : acc) {
    if (poly.is_zero()) continue;
    std::vector<Integer> c = poly.coefficients();
    if (alg.scale < 0) {
      const auto shift = static_cast<std::size_t>(-alg.scale);
      const int val = poly.valuation();
      if (val < static_cast<int>(shift))
        throw VerificationError("APA expansion keeps a negative power of lambda at (" + std::to_string(idx[0]) + "," +
                                std::to_string(idx[1]) + "," + std::to_string(idx[2]) + ")");
      c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(shift));
    } else if (alg.scale > 0) {
      c.insert(c.begin(), static_cast<std::size_t>(alg.scale), Integer(0));
    }
    out.emplace(idx, LambdaPoly(std::move(c)));
  }
  return out;
}

APACheckResult apa_symbolic_check(const APAAlgorithm& alg) {
  std::map<Index3, LambdaPoly> expansion;
  try {
    expansion = apa_expand(alg);
  } catch (const VerificationError& e) {
    return {false, e.what()};
  }
  const TargetTensor target = alg.target();
  auto where = [](const Index3& idx) {
    return "(" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," + std::to_string(idx[2]) + ")";
  };
  for (const auto& [idx, poly] : expansion) {
    if (poly.degree() > alg.degree)
      return {false, "degree " + std::to_string(poly.degree()) + " exceeds declared degree at " + where(idx)};
    if (Rational(poly.coefficient(0)) != target.at(idx))
      return {false, "constant term " + poly.coefficient(0).get_str() + " differs from target " +
                         target.at(idx).get_str() + " at " + where(idx)};
  }
  for (const auto& [idx, c] : target.entries())
    if (!expansion.count(idx)) return {false, "target entry missing at " + where(idx)};
  return {};
}

std::vector<Rational> apa_evaluate(const APAAlgorithm& alg, const std::vector<Rational>& x,
                                   const std::vector<Rational>& y, const Rational& t, OpCounter& ctr) {
  if (x.size() != alg.U.cols() || y.size() != alg.V.cols()) throw DimensionError("apa_evaluate: input sizes do not match");
  if (t == 0) throw std::invalid_argument("apa_evaluate: lambda must be nonzero");
  const std::size_t r = alg.border_rank();
  std::vector<Rational> prods(r);
  for (std::size_t q = 0; q < r; ++q) {
    Rational l = 0, lp = 0;
    for (std::size_t a = 0; a < x.size(); ++a)
      if (!alg.U(q, a).is_zero()) l += alg.U(q, a).eval(t) * x[a];
    for (std::size_t b = 0; b < y.size(); ++b)
      if (!alg.V(q, b).is_zero()) lp += alg.V(q, b).eval(t) * y[b];
    prods[q] = l * lp;
  }
  ctr.mults += r;
  Rational factor = 1;
  for (int e = 0; e < std::abs(alg.scale); ++e) factor *= t;
  if (alg.scale < 0) factor = 1 / factor;
  std::vector<Rational> out(alg.W.rows(), Rational(0));
  for (std::size_t g = 0; g < out.size(); ++g) {
    for (std::size_t q = 0; q < r; ++q)
      if (!alg.W(g, q).is_zero()) out[g] += alg.W(g, q).eval(t) * prods[q];
    out[g] *= factor;
  }
  return out;
}

std::vector<double> apa_apply_numeric(const APAAlgorithm& alg, const std::vector<double>& x,
                                      const std::vector<double>& y, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("apa_apply_numeric: lambda must lie in (0, 1)");
  if (x.size() != alg.U.cols() || y.size() != alg.V.cols()) throw DimensionError("apa_apply_numeric: input sizes do not match");
  const std::size_t r = alg.border_rank();
  std::vector<double> prods(r);
  for (std::size_t q = 0; q < r; ++q) {
    double l = 0.0, lp = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a)
      if (!alg.U(q, a).is_zero()) l += alg.U(q, a).eval(lambda) * x[a];
    for (std::size_t b = 0; b < y.size(); ++b)
      if (!alg.V(q, b).is_zero()) lp += alg.V(q, b).eval(lambda) * y[b];
    prods[q] = l * lp;
  }
  const double factor = std::pow(lambda, alg.scale);
  std::vector<double> out(alg.W.rows(), 0.0);
  for (std::size_t g = 0; g < out.size(); ++g) {
    for (std::size_t q = 0; q < r; ++q)
      if (!alg.W(g, q).is_zero()) out[g] += alg.W(g, q).eval(lambda) * prods[q];
    out[g] *= factor;
  }
  return out;
}

std::vector<Rational> apa_lift_exact(const APAAlgorithm& alg, const std::vector<Rational>& x,
                                     const std::vector<Rational>& y, OpCounter& ctr, std::vector<Rational> nodes) {
  const auto need = static_cast<std::size_t>(alg.degree) + 1;
  if (nodes.empty())
    for (std::size_t t = 1; t <= need; ++t) nodes.emplace_back(static_cast<long>(t));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == 0) throw std::invalid_argument("apa_lift_exact: interpolation nodes must be nonzero");
    for (std::size_t j = 0; j < i; ++j)
      if (nodes[i] == nodes[j]) throw std::invalid_argument("apa_lift_exact: interpolation nodes must be distinct");
  }
  if (nodes.size() < need)
    throw std::invalid_argument("apa_lift_exact: need " + std::to_string(need) + " nodes, got " +
                                std::to_string(nodes.size()));
  nodes.resize(need);

  std::vector<Rational> out(alg.W.rows(), Rational(0));
  for (std::size_t i = 0; i < need; ++i) {
    // Lagrange basis polynomial for node i evaluated at 0.
    Rational weight = 1;
    for (std::size_t j = 0; j < need; ++j)
      if (j != i) weight *= -nodes[j] / (nodes[i] - nodes[j]);
    const auto val = apa_evaluate(alg, x, y, nodes[i], ctr);
    for (std::size_t g = 0; g < out.size(); ++g) out[g] += weight * val[g];
  }
  return out;
}

double apa_exponent(std::size_t m, std::size_t k, std::size_t n) {
  const double vol = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n);
  if (vol < 2) throw std::invalid_argument("apa_exponent: mkn must be at least 2");
  const double border = 0.5 * (vol + static_cast<double>(m * k + k * n));
  return 3.0 * std::log(border) / std::log(vol);
}

double apa_effective_exponent(std::size_t m, std::size_t k, std::size_t n, double border_rank,
                              std::size_t degree, std::size_t powers) {
  const double vol = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n);
  if (vol < 2 || powers == 0 || border_rank <= 0)
    throw std::invalid_argument("apa_effective_exponent: need mkn >= 2, powers >= 1, positive rank");
  const double p = static_cast<double>(powers);
  const double lift = static_cast<double>(powers * degree + 1);
  return 3.0 * (p * std::log(border_rank) + 2.0 * std::log(lift)) / (p * std::log(vol));
}

Integer lambda_packed_operand(const Integer& a, const Integer& u, std::size_t d_bits) {
  Integer out = a;
  out <<= static_cast<mp_bitcnt_t>(d_bits);
  out += u;
  return out;
}

}  // namespace fastmm
