#include "fastmm/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fastmm {

std::string MMShape::str() const {
  return "(" + std::to_string(m) + "," + std::to_string(k) + "," + std::to_string(n) + ")";
}

// ---------------------------------------------------------------------------
// TargetTensor

TargetTensor::TargetTensor(std::size_t dim_a, std::size_t dim_b, std::size_t dim_c)
    : dims_{dim_a, dim_b, dim_c} {}

void TargetTensor::check(const Index3& idx) const {
  for (int r = 0; r < 3; ++r)
    if (idx[r] >= dims_[r]) throw DimensionError("tensor index out of range");
}

void TargetTensor::set(Index3 idx, const Rational& value) {
  check(idx);
  if (value == 0)
    coeffs_.erase(idx);
  else
    coeffs_[idx] = value;
}

void TargetTensor::add(Index3 idx, const Rational& value) {
  check(idx);
  auto [it, inserted] = coeffs_.try_emplace(idx, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coeffs_.erase(it);
  } else if (value == 0) {
    coeffs_.erase(it);
  }
}

Rational TargetTensor::at(Index3 idx) const {
  auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

TargetTensor TargetTensor::mm(const MMShape& s) {
  TargetTensor t(s.a_size(), s.b_size(), s.c_size());
  for (std::size_t i = 0; i < s.m; ++i)
    for (std::size_t j = 0; j < s.k; ++j)
      for (std::size_t h = 0; h < s.n; ++h)
        t.coeffs_.emplace(Index3{static_cast<std::uint32_t>(i * s.k + j),
                                 static_cast<std::uint32_t>(j * s.n + h),
                                 static_cast<std::uint32_t>(i * s.n + h)},
                          Rational(1));
  return t;
}

TargetTensor TargetTensor::trace(const std::vector<MMShape>& problems) {
  DisjointMMTarget layout{problems};
  TargetTensor t(layout.dim_a(), layout.dim_b(), layout.dim_d());
  for (std::size_t p = 0; p < problems.size(); ++p) {
    const MMShape& s = problems[p];
    const auto oa = layout.a_offset(p), ob = layout.b_offset(p), od = layout.d_offset(p);
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.k; ++j)
        for (std::size_t h = 0; h < s.n; ++h)
          t.coeffs_.emplace(Index3{static_cast<std::uint32_t>(oa + i * s.k + j),
                                   static_cast<std::uint32_t>(ob + j * s.n + h),
                                   static_cast<std::uint32_t>(od + h * s.m + i)},
                            Rational(1));
  }
  return t;
}

TargetTensor TargetTensor::rotated() const {
  TargetTensor t(dims_[1], dims_[2], dims_[0]);
  for (const auto& [idx, c] : coeffs_) t.coeffs_.emplace(Index3{idx[1], idx[2], idx[0]}, c);
  return t;
}

// ---------------------------------------------------------------------------
// DisjointMMTarget

std::size_t DisjointMMTarget::a_offset(std::size_t p) const {
  std::size_t off = 0;
  for (std::size_t q = 0; q < p; ++q) off += problems[q].a_size();
  return off;
}

std::size_t DisjointMMTarget::b_offset(std::size_t p) const {
  std::size_t off = 0;
  for (std::size_t q = 0; q < p; ++q) off += problems[q].b_size();
  return off;
}

std::size_t DisjointMMTarget::d_offset(std::size_t p) const {
  std::size_t off = 0;
  for (std::size_t q = 0; q < p; ++q) off += problems[q].c_size();
  return off;
}

DisjointMMTarget DisjointMMTarget::rotated() const {
  DisjointMMTarget r;
  for (const auto& s : problems) r.problems.push_back(s.rotated());
  return r;
}

// ---------------------------------------------------------------------------
// SparseForm

SparseForm::SparseForm(std::initializer_list<Entry> entries) {
  for (const auto& [idx, c] : entries) add(idx, c);
}

void SparseForm::add(std::uint32_t idx, const Rational& c) {
  if (c == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), idx,
                             [](const Entry& e, std::uint32_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == idx) {
    it->second += c;
    if (it->second == 0) entries_.erase(it);
  } else {
    entries_.insert(it, Entry{idx, c});
  }
}

Rational SparseForm::at(std::uint32_t idx) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), idx,
                             [](const Entry& e, std::uint32_t i) { return e.first < i; });
  return (it != entries_.end() && it->first == idx) ? it->second : Rational(0);
}

SparseForm SparseForm::scaled(const Rational& c) const {
  SparseForm out;
  if (c == 0) return out;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.second *= c;
  return out;
}

SparseForm SparseForm::shifted(std::int64_t delta) const {
  SparseForm out = *this;
  for (auto& e : out.entries_) {
    const std::int64_t idx = static_cast<std::int64_t>(e.first) + delta;
    if (idx < 0) throw DimensionError("SparseForm::shifted: negative index");
    e.first = static_cast<std::uint32_t>(idx);
  }
  return out;
}

SparseForm SparseForm::restricted(std::uint32_t lo, std::uint32_t hi) const {
  SparseForm out;
  for (const auto& [idx, c] : entries_)
    if (idx >= lo && idx < hi) out.entries_.emplace_back(idx - lo, c);
  return out;
}

std::uint32_t SparseForm::max_index() const { return entries_.empty() ? 0 : entries_.back().first; }

SparseForm row_form(const Matrix<Rational>& m, std::size_t row) {
  SparseForm f;
  for (std::size_t t = 0; t < m.cols(); ++t)
    if (m(row, t) != 0) f.add(static_cast<std::uint32_t>(t), m(row, t));
  return f;
}

SparseForm column_form(const Matrix<Rational>& m, std::size_t col) {
  SparseForm f;
  for (std::size_t t = 0; t < m.rows(); ++t)
    if (m(t, col) != 0) f.add(static_cast<std::uint32_t>(t), m(t, col));
  return f;
}

// ---------------------------------------------------------------------------
// LinearProgram

Matrix<Rational> LinearProgram::coefficients() const {
  std::vector<std::vector<Rational>> values;
  values.reserve(inputs + steps.size());
  for (std::size_t i = 0; i < inputs; ++i) {
    std::vector<Rational> e(inputs, Rational(0));
    e[i] = 1;
    values.push_back(std::move(e));
  }
  for (const auto& s : steps) {
    if (s.lhs >= values.size() || s.rhs >= values.size())
      throw DimensionError("LinearProgram: step refers to a later value");
    std::vector<Rational> e(inputs);
    for (std::size_t i = 0; i < inputs; ++i)
      e[i] = s.subtract ? Rational(values[s.lhs][i] - values[s.rhs][i])
                        : Rational(values[s.lhs][i] + values[s.rhs][i]);
    values.push_back(std::move(e));
  }
  if (outputs.empty()) throw DimensionError("LinearProgram: no outputs");
  Matrix<Rational> out = Matrix<Rational>::zeros(outputs.size(), inputs);
  for (std::size_t r = 0; r < outputs.size(); ++r) {
    if (outputs[r] >= values.size()) throw DimensionError("LinearProgram: output out of range");
    for (std::size_t i = 0; i < inputs; ++i) out(r, i) = values[outputs[r]][i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// BilinearAlgorithm

TargetTensor BilinearAlgorithm::target() const {
  if (shape) return TargetTensor::mm(*shape);
  if (problem) return *problem;
  throw DimensionError("algorithm '" + name + "' has neither an MM shape nor a target tensor");
}

void BilinearAlgorithm::check_consistent() const {
  const std::size_t r = U.rows();
  if (r == 0 || V.rows() != r || W.cols() != r)
    throw DimensionError("algorithm '" + name + "': U, V, W disagree on the rank");
  if (shape) {
    if (U.cols() != shape->a_size() || V.cols() != shape->b_size() || W.rows() != shape->c_size())
      throw DimensionError("algorithm '" + name + "': coefficient shapes do not match MM" +
                           shape->str());
  } else if (problem) {
    if (U.cols() != problem->dim_a() || V.cols() != problem->dim_b() ||
        W.rows() != problem->dim_c())
      throw DimensionError("algorithm '" + name + "': coefficient shapes do not match the target");
  }
  if (schedule) {
    if (!(schedule->a_forms.coefficients() == U) || !(schedule->b_forms.coefficients() == V) ||
        !(schedule->combine.coefficients() == W))
      throw DimensionError("algorithm '" + name + "': evaluation schedule disagrees with U, V, W");
  }
}

bool BilinearAlgorithm::coefficients_in_integers() const {
  for (const auto* m : {&U, &V, &W})
    for (const auto& c : m->entries())
      if (c.get_den() != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

VerifyResult compare_expansion(const std::map<Index3, Rational>& got, const TargetTensor& t) {
  auto g = got.begin();
  auto e = t.entries().begin();
  while (g != got.end() || e != t.entries().end()) {
    if (e == t.entries().end() || (g != got.end() && g->first < e->first)) {
      return {false, g->first, Rational(0), g->second};
    }
    if (g == got.end() || e->first < g->first) {
      return {false, e->first, e->second, Rational(0)};
    }
    if (g->second != e->second) return {false, g->first, e->second, g->second};
    ++g;
    ++e;
  }
  return {};
}

void accumulate(std::map<Index3, Rational>& acc, const SparseForm& x, const SparseForm& y,
                const SparseForm& z) {
  for (const auto& [ia, ca] : x.entries())
    for (const auto& [ib, cb] : y.entries()) {
      const Rational ab = ca * cb;
      for (const auto& [ic, cc] : z.entries()) {
        auto [it, inserted] = acc.try_emplace(Index3{ia, ib, ic}, ab * cc);
        if (!inserted) {
          it->second += ab * cc;
          if (it->second == 0) acc.erase(it);
        }
      }
    }
}

}  // namespace

std::string VerifyResult::describe() const {
  if (ok) return "PASS";
  std::ostringstream os;
  os << "FAIL at (" << (*violated)[0] << "," << (*violated)[1] << "," << (*violated)[2]
     << "): expected " << expected.get_str() << ", got " << actual.get_str();
  return os.str();
}

VerifyResult verify_target(const BilinearAlgorithm& alg, const TargetTensor& t) {
  alg.check_consistent();
  if (alg.dim_a() != t.dim_a() || alg.dim_b() != t.dim_b() || alg.dim_c() != t.dim_c())
    throw DimensionError("verify_target: algorithm and tensor shapes differ");
  std::map<Index3, Rational> acc;
  for (std::size_t q = 0; q < alg.rank(); ++q)
    accumulate(acc, row_form(alg.U, q), row_form(alg.V, q), column_form(alg.W, q));
  return compare_expansion(acc, t);
}

VerifyResult verify_target(const TrilinearDecomposition& dec, const TargetTensor& t) {
  std::map<Index3, Rational> acc;
  for (const auto& term : dec.terms) {
    if ((!term.a.empty() && term.a.max_index() >= t.dim_a()) ||
        (!term.b.empty() && term.b.max_index() >= t.dim_b()) ||
        (!term.d.empty() && term.d.max_index() >= t.dim_c()))
      throw DimensionError("verify_target: decomposition refers to variables outside the target");
    accumulate(acc, term.a, term.b, term.d);
  }
  return compare_expansion(acc, t);
}

BilinearAlgorithm& require_verified(BilinearAlgorithm& alg) {
  auto res = verify(alg);
  if (!res) throw VerificationError("algorithm '" + alg.name + "' failed verification: " + res.describe());
  alg.verified = true;
  return alg;
}

double exponent_from_rank(std::size_t m, std::size_t k, std::size_t n, double rank) {
  const double volume = static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n);
  if (m == 0 || k == 0 || n == 0) throw DimensionError("exponent_from_rank: dimensions must be positive");
  if (volume < 2) throw DimensionError("exponent_from_rank: logarithm base mkn must be at least 2");
  if (!(rank >= 1)) throw DimensionError("exponent_from_rank: rank must be at least 1");
  return 3.0 * std::log(rank) / std::log(volume);
}

// ---------------------------------------------------------------------------
// Trilinear <-> bilinear

void TrilinearDecomposition::canonicalize() { std::sort(terms.begin(), terms.end()); }

TrilinearDecomposition trilinear_from_bilinear(const BilinearAlgorithm& alg) {
  alg.check_consistent();
  TrilinearDecomposition dec;
  dec.name = alg.name;
  if (alg.shape) {
    dec.layout.problems = {*alg.shape};
    dec.target = dec.layout.trace_tensor();
  } else {
    dec.target = alg.target();
  }
  for (std::size_t q = 0; q < alg.rank(); ++q) {
    TrilinearTerm term{row_form(alg.U, q), row_form(alg.V, q), {}};
    if (alg.shape) {
      const MMShape& s = *alg.shape;
      for (std::size_t i = 0; i < s.m; ++i)
        for (std::size_t h = 0; h < s.n; ++h)
          term.d.add(static_cast<std::uint32_t>(h * s.m + i), alg.W(i * s.n + h, q));
    } else {
      term.d = column_form(alg.W, q);
    }
    dec.terms.push_back(std::move(term));
  }
  return dec;
}

TrilinearDecomposition rotate_roles(const TrilinearDecomposition& dec, Role role) {
  if (role == Role::D) return dec;
  // Role A: (a, b, d) -> (b, d, a); role B applies the rotation twice.
  const int turns = role == Role::A ? 1 : 2;
  TrilinearDecomposition out = dec;
  for (int t = 0; t < turns; ++t) {
    out.layout = out.layout.rotated();
    out.target = out.target.rotated();
    for (auto& term : out.terms) term = TrilinearTerm{term.b, term.d, term.a};
  }
  return out;
}

std::vector<BilinearAlgorithm> bilinear_from_trilinear(const TrilinearDecomposition& dec, Role role) {
  const TrilinearDecomposition rot = rotate_roles(dec, role);
  const char* suffix = role == Role::D ? "" : role == Role::A ? "/dualA" : "/dualB";
  std::vector<BilinearAlgorithm> out;

  if (!rot.is_mm()) {
    const std::size_t r = rot.rank();
    BilinearAlgorithm alg;
    alg.name = dec.name + suffix;
    alg.problem = rot.target;
    alg.U = Matrix<Rational>::zeros(r, rot.target.dim_a());
    alg.V = Matrix<Rational>::zeros(r, rot.target.dim_b());
    alg.W = Matrix<Rational>::zeros(rot.target.dim_c(), r);
    for (std::size_t q = 0; q < r; ++q) {
      for (const auto& [i, c] : rot.terms[q].a.entries()) alg.U(q, i) = c;
      for (const auto& [i, c] : rot.terms[q].b.entries()) alg.V(q, i) = c;
      for (const auto& [i, c] : rot.terms[q].d.entries()) alg.W(i, q) = c;
    }
    alg.verified = static_cast<bool>(verify(alg));
    out.push_back(std::move(alg));
    return out;
  }

  const auto& layout = rot.layout;
  const bool split = layout.problems.size() > 1;
  for (std::size_t p = 0; p < layout.problems.size(); ++p) {
    const MMShape s = layout.problems[p];
    const auto oa = static_cast<std::uint32_t>(layout.a_offset(p));
    const auto ob = static_cast<std::uint32_t>(layout.b_offset(p));
    const auto od = static_cast<std::uint32_t>(layout.d_offset(p));
    std::vector<TrilinearTerm> kept;
    for (const auto& term : rot.terms) {
      TrilinearTerm t{term.a.restricted(oa, oa + s.a_size()), term.b.restricted(ob, ob + s.b_size()),
                      term.d.restricted(od, od + s.c_size())};
      if (split && (t.a.empty() || t.b.empty() || t.d.empty())) continue;
      kept.push_back(std::move(t));
    }
    if (kept.empty()) throw DimensionError("bilinear_from_trilinear: no terms touch problem " + s.str());
    const std::size_t r = kept.size();
    BilinearAlgorithm alg;
    alg.name = dec.name + suffix + (split ? "/p" + std::to_string(p) : std::string());
    alg.shape = s;
    alg.U = Matrix<Rational>::zeros(r, s.a_size());
    alg.V = Matrix<Rational>::zeros(r, s.b_size());
    alg.W = Matrix<Rational>::zeros(s.c_size(), r);
    for (std::size_t q = 0; q < r; ++q) {
      for (const auto& [i, c] : kept[q].a.entries()) alg.U(q, i) = c;
      for (const auto& [i, c] : kept[q].b.entries()) alg.V(q, i) = c;
      for (const auto& [idx, c] : kept[q].d.entries()) {
        const std::size_t h = idx / s.m, i = idx % s.m;
        alg.W(i * s.n + h, q) = c;
      }
    }
    alg.verified = static_cast<bool>(verify(alg));
    out.push_back(std::move(alg));
  }
  return out;
}

BilinearAlgorithm transpose(const BilinearAlgorithm& alg) {
  if (!alg.shape) throw DimensionError("transpose: algorithm is not a matrix multiplication");
  const MMShape s = *alg.shape;
  const MMShape t = s.transposed();  // (n, k, m)
  const std::size_t r = alg.rank();
  BilinearAlgorithm out;
  out.name = alg.name + "/T";
  out.shape = t;
  out.U = Matrix<Rational>::zeros(r, t.a_size());  // B^T: n x k, entry (h,j) = b_{jh}
  out.V = Matrix<Rational>::zeros(r, t.b_size());  // A^T: k x m, entry (j,i) = a_{ij}
  out.W = Matrix<Rational>::zeros(t.c_size(), r);  // C^T: n x m, entry (h,i) = c_{ih}
  for (std::size_t q = 0; q < r; ++q) {
    for (std::size_t j = 0; j < s.k; ++j)
      for (std::size_t h = 0; h < s.n; ++h) out.U(q, h * s.k + j) = alg.V(q, j * s.n + h);
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.k; ++j) out.V(q, j * s.m + i) = alg.U(q, i * s.k + j);
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t h = 0; h < s.n; ++h) out.W(h * s.m + i, q) = alg.W(i * s.n + h, q);
  }
  out.verified = alg.verified && static_cast<bool>(verify(out));
  return out;
}

std::vector<BilinearAlgorithm> transpose_duals(const BilinearAlgorithm& alg) {
  if (!alg.shape) throw DimensionError("transpose_duals: algorithm is not a matrix multiplication");
  if (!verify(alg)) throw VerificationError("transpose_duals: input algorithm '" + alg.name + "' is not verified");
  BilinearAlgorithm base = alg;
  base.verified = true;
  const TrilinearDecomposition tri = trilinear_from_bilinear(base);
  std::vector<BilinearAlgorithm> out;
  out.push_back(base);
  out.push_back(bilinear_from_trilinear(tri, Role::A).front());
  out.push_back(bilinear_from_trilinear(tri, Role::B).front());
  for (std::size_t i = 0; i < 3; ++i) out.push_back(transpose(out[i]));
  for (auto& a : out) require_verified(a);
  return out;
}

bool same_terms(const TrilinearDecomposition& x, const TrilinearDecomposition& y) {
  if (!(x.layout == y.layout) || !(x.target == y.target) || x.rank() != y.rank()) return false;
  auto tx = x.terms, ty = y.terms;
  std::sort(tx.begin(), tx.end());
  std::sort(ty.begin(), ty.end());
  return tx == ty;
}

bool same_terms(const BilinearAlgorithm& x, const BilinearAlgorithm& y) {
  if (x.shape != y.shape || x.rank() != y.rank()) return false;
  return same_terms(trilinear_from_bilinear(x), trilinear_from_bilinear(y));
}

std::size_t padded_size(std::size_t n, std::size_t base, std::size_t cutoff) {
  if (base < 2) throw DimensionError("padded_size: base must be at least 2");
  if (cutoff < 1) throw DimensionError("padded_size: cutoff must be at least 1");
  if (n <= cutoff) return n;
  std::size_t scale = 1;
  while ((n + scale - 1) / scale > cutoff) scale *= base;
  return ((n + scale - 1) / scale) * scale;
}

}  // namespace fastmm
