#include "fastmm/serialize.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace fastmm {
namespace {

struct Line {
  std::size_t no = 0;
  std::string keyword;
  std::vector<std::string> args;
  std::string rest;  // text after the keyword, for `name`
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream is(text);
  std::string raw;
  std::size_t no = 0;
  while (std::getline(is, raw)) {
    ++no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    Line l;
    l.no = no;
    std::istringstream ls(raw);
    ls >> l.keyword;
    std::string tok;
    while (ls >> tok) l.args.push_back(tok);
    const auto kw_end = raw.find(l.keyword, first) + l.keyword.size();
    const auto rest_start = raw.find_first_not_of(" \t", kw_end);
    l.rest = rest_start == std::string::npos ? "" : raw.substr(rest_start);
    out.push_back(std::move(l));
  }
  return out;
}

std::size_t to_size(const Line& l, const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(l.no, "expected a nonnegative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(l.no, "integer out of range: '" + s + "'");
  }
}

long to_long(const Line& l, const std::string& s) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(l.no, "expected an integer, got '" + s + "'");
}

Rational to_rational(const Line& l, const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw ParseError(l.no, "bad rational '" + s + "'");
  if (q.get_den() == 0) throw ParseError(l.no, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

Integer to_integer(const Line& l, const std::string& s) {
  Integer z;
  if (s.empty() || z.set_str(s, 10) != 0) throw ParseError(l.no, "bad integer '" + s + "'");
  return z;
}

void expect_args(const Line& l, std::size_t n) {
  if (l.args.size() != n)
    throw ParseError(l.no, "'" + l.keyword + "' expects " + std::to_string(n) + " fields, got " +
                               std::to_string(l.args.size()));
}

void expect_header(const std::vector<Line>& lines, const std::string& kind) {
  if (lines.empty()) throw ParseError(0, "empty input");
  if (lines.front().keyword != kind)
    throw ParseError(lines.front().no, "expected '" + kind + "', got '" + lines.front().keyword + "'");
}

void expect_end(const std::vector<Line>& lines, std::size_t idx) {
  if (idx + 1 != lines.size()) throw ParseError(lines[idx + 1].no, "content after 'end'");
}

std::string idx3_str(const Index3& i) {
  return std::to_string(i[0]) + " " + std::to_string(i[1]) + " " + std::to_string(i[2]);
}

// Target lines for non-MM problems.
void write_target(std::ostringstream& os, const TargetTensor& t) {
  os << "dims " << t.dim_a() << ' ' << t.dim_b() << ' ' << t.dim_c() << '\n';
  for (const auto& [idx, c] : t.entries()) os << "target " << idx3_str(idx) << ' ' << c.get_str() << '\n';
}

struct TargetBuilder {
  std::optional<std::array<std::size_t, 3>> dims;
  std::vector<std::pair<Line, std::pair<Index3, Rational>>> entries;

  bool take(const Line& l) {
    if (l.keyword == "dims") {
      expect_args(l, 3);
      if (dims) throw ParseError(l.no, "duplicate 'dims'");
      dims = {to_size(l, l.args[0]), to_size(l, l.args[1]), to_size(l, l.args[2])};
      return true;
    }
    if (l.keyword == "target") {
      expect_args(l, 4);
      Index3 idx{static_cast<std::uint32_t>(to_size(l, l.args[0])), static_cast<std::uint32_t>(to_size(l, l.args[1])),
                 static_cast<std::uint32_t>(to_size(l, l.args[2]))};
      entries.push_back({l, {idx, to_rational(l, l.args[3])}});
      return true;
    }
    return false;
  }

  TargetTensor build(std::size_t end_line) const {
    if (!dims) throw ParseError(end_line, "missing 'shape'/'problem' or 'dims'");
    TargetTensor t((*dims)[0], (*dims)[1], (*dims)[2]);
    for (const auto& [l, e] : entries) {
      try {
        t.set(e.first, e.second);
      } catch (const std::exception& ex) {
        throw ParseError(l.no, ex.what());
      }
    }
    return t;
  }
};

const char* program_tag(int which) { return which == 0 ? "SA" : which == 1 ? "SB" : "SW"; }

void write_program(std::ostringstream& os, const LinearProgram& p, int which) {
  const char* tag = program_tag(which);
  os << tag << " inputs " << p.inputs << '\n';
  for (const auto& s : p.steps) os << tag << " step " << s.lhs << (s.subtract ? " - " : " + ") << s.rhs << '\n';
  os << tag << " out";
  for (auto o : p.outputs) os << ' ' << o;
  os << '\n';
}

bool take_program(const Line& l, std::optional<EvaluationSchedule>& sched) {
  int which = l.keyword == "SA" ? 0 : l.keyword == "SB" ? 1 : l.keyword == "SW" ? 2 : -1;
  if (which < 0) return false;
  if (!sched) sched.emplace();
  LinearProgram& p = which == 0 ? sched->a_forms : which == 1 ? sched->b_forms : sched->combine;
  if (l.args.empty()) throw ParseError(l.no, "schedule line without a directive");
  const std::string& what = l.args[0];
  if (what == "inputs") {
    expect_args(l, 2);
    p.inputs = to_size(l, l.args[1]);
  } else if (what == "step") {
    expect_args(l, 4);
    if (l.args[2] != "+" && l.args[2] != "-") throw ParseError(l.no, "step operator must be + or -");
    const std::size_t lhs = to_size(l, l.args[1]), rhs = to_size(l, l.args[3]);
    const std::size_t avail = p.inputs + p.steps.size();
    if (lhs >= avail || rhs >= avail) throw ParseError(l.no, "step refers to a value not yet computed");
    p.steps.push_back({lhs, rhs, l.args[2] == "-"});
  } else if (what == "out") {
    for (std::size_t t = 1; t < l.args.size(); ++t) {
      const std::size_t o = to_size(l, l.args[t]);
      if (o >= p.inputs + p.steps.size()) throw ParseError(l.no, "output refers to an unknown value");
      p.outputs.push_back(o);
    }
  } else {
    throw ParseError(l.no, "unknown schedule directive '" + what + "'");
  }
  return true;
}

template <class T>
void put(Matrix<T>& m, std::size_t r, std::size_t c, T v, const Line& l, const char* what) {
  if (r >= m.rows() || c >= m.cols())
    throw ParseError(l.no, std::string(what) + " index (" + std::to_string(r) + "," + std::to_string(c) +
                               ") out of range");
  m(r, c) = std::move(v);
}

std::string form_str(const SparseForm& f) {
  std::string s;
  for (const auto& [idx, c] : f.entries()) s += ' ' + std::to_string(idx) + ':' + c.get_str();
  return s;
}

SparseForm parse_form(const Line& l) {
  SparseForm f;
  for (std::size_t t = 1; t < l.args.size(); ++t) {
    const auto& tok = l.args[t];
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw ParseError(l.no, "expected idx:coef, got '" + tok + "'");
    const auto idx = to_size(l, tok.substr(0, colon));
    if (f.at(static_cast<std::uint32_t>(idx)) != 0) throw ParseError(l.no, "duplicate index " + std::to_string(idx));
    f.add(static_cast<std::uint32_t>(idx), to_rational(l, tok.substr(colon + 1)));
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// bilinear

std::string write_bilinear(const BilinearAlgorithm& alg) {
  alg.check_consistent();
  std::ostringstream os;
  os << "bilinear\n";
  os << "name " << alg.name << '\n';
  if (alg.shape) os << "shape " << alg.shape->m << ' ' << alg.shape->k << ' ' << alg.shape->n << '\n';
  else write_target(os, alg.target());
  os << "rank " << alg.rank() << '\n';
  for (std::size_t q = 0; q < alg.rank(); ++q)
    for (std::size_t t = 0; t < alg.dim_a(); ++t)
      if (alg.U(q, t) != 0) os << "U " << q << ' ' << t << ' ' << alg.U(q, t).get_str() << '\n';
  for (std::size_t q = 0; q < alg.rank(); ++q)
    for (std::size_t t = 0; t < alg.dim_b(); ++t)
      if (alg.V(q, t) != 0) os << "V " << q << ' ' << t << ' ' << alg.V(q, t).get_str() << '\n';
  for (std::size_t q = 0; q < alg.rank(); ++q)
    for (std::size_t g = 0; g < alg.dim_c(); ++g)
      if (alg.W(g, q) != 0) os << "W " << q << ' ' << g << ' ' << alg.W(g, q).get_str() << '\n';
  if (alg.schedule) {
    write_program(os, alg.schedule->a_forms, 0);
    write_program(os, alg.schedule->b_forms, 1);
    write_program(os, alg.schedule->combine, 2);
  }
  os << "end\n";
  return os.str();
}

BilinearAlgorithm read_bilinear(const std::string& text) {
  const auto lines = tokenize(text);
  expect_header(lines, "bilinear");
  BilinearAlgorithm alg;
  std::optional<std::size_t> rank;
  TargetBuilder target;
  std::vector<Line> coeffs;
  std::size_t end_idx = lines.size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.keyword == "end") {
      end_idx = i;
      break;
    }
    if (l.keyword == "name") {
      alg.name = l.rest;
    } else if (l.keyword == "shape") {
      expect_args(l, 3);
      const MMShape s{to_size(l, l.args[0]), to_size(l, l.args[1]), to_size(l, l.args[2])};
      if (s.m == 0 || s.k == 0 || s.n == 0) throw ParseError(l.no, "shape dimensions must be positive");
      alg.shape = s;
    } else if (l.keyword == "rank") {
      expect_args(l, 1);
      rank = to_size(l, l.args[0]);
      if (*rank == 0) throw ParseError(l.no, "rank must be positive");
    } else if (l.keyword == "U" || l.keyword == "V" || l.keyword == "W") {
      expect_args(l, 3);
      coeffs.push_back(l);
    } else if (target.take(l) || take_program(l, alg.schedule)) {
    } else {
      throw ParseError(l.no, "unknown keyword '" + l.keyword + "'");
    }
  }
  if (end_idx == lines.size()) throw ParseError(lines.back().no, "missing 'end'");
  expect_end(lines, end_idx);
  const std::size_t end_line = lines[end_idx].no;
  if (!rank) throw ParseError(end_line, "missing 'rank'");
  if (alg.shape && target.dims) throw ParseError(end_line, "both 'shape' and 'dims' given");
  std::size_t da, db, dc;
  if (alg.shape) {
    da = alg.shape->a_size(), db = alg.shape->b_size(), dc = alg.shape->c_size();
  } else {
    alg.problem = target.build(end_line);
    da = alg.problem->dim_a(), db = alg.problem->dim_b(), dc = alg.problem->dim_c();
  }
  alg.U = Matrix<Rational>::zeros(*rank, da);
  alg.V = Matrix<Rational>::zeros(*rank, db);
  alg.W = Matrix<Rational>::zeros(dc, *rank);
  for (const auto& l : coeffs) {
    const std::size_t q = to_size(l, l.args[0]), t = to_size(l, l.args[1]);
    Rational c = to_rational(l, l.args[2]);
    if (l.keyword == "U") put(alg.U, q, t, c, l, "U");
    else if (l.keyword == "V") put(alg.V, q, t, c, l, "V");
    else put(alg.W, t, q, c, l, "W");
  }
  try {
    alg.check_consistent();
  } catch (const std::exception& e) {
    throw ParseError(end_line, e.what());
  }
  return alg;
}

// ---------------------------------------------------------------------------
// trilinear

std::string write_trilinear(const TrilinearDecomposition& dec) {
  std::ostringstream os;
  os << "trilinear\n";
  os << "name " << dec.name << '\n';
  if (dec.is_mm()) {
    for (const auto& s : dec.layout.problems) os << "problem " << s.m << ' ' << s.k << ' ' << s.n << '\n';
  } else {
    write_target(os, dec.target);
  }
  os << "aggregates " << dec.aggregate_terms << '\n';
  os << "rank " << dec.rank() << '\n';
  for (std::size_t q = 0; q < dec.terms.size(); ++q) {
    os << "A " << q << form_str(dec.terms[q].a) << '\n';
    os << "B " << q << form_str(dec.terms[q].b) << '\n';
    os << "D " << q << form_str(dec.terms[q].d) << '\n';
  }
  os << "end\n";
  return os.str();
}

TrilinearDecomposition read_trilinear(const std::string& text) {
  const auto lines = tokenize(text);
  expect_header(lines, "trilinear");
  TrilinearDecomposition dec;
  std::optional<std::size_t> rank;
  TargetBuilder target;
  std::vector<Line> forms;
  std::size_t end_idx = lines.size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.keyword == "end") {
      end_idx = i;
      break;
    }
    if (l.keyword == "name") {
      dec.name = l.rest;
    } else if (l.keyword == "problem") {
      expect_args(l, 3);
      const MMShape s{to_size(l, l.args[0]), to_size(l, l.args[1]), to_size(l, l.args[2])};
      if (s.m == 0 || s.k == 0 || s.n == 0) throw ParseError(l.no, "problem dimensions must be positive");
      dec.layout.problems.push_back(s);
    } else if (l.keyword == "aggregates") {
      expect_args(l, 1);
      dec.aggregate_terms = to_size(l, l.args[0]);
    } else if (l.keyword == "rank") {
      expect_args(l, 1);
      rank = to_size(l, l.args[0]);
    } else if (l.keyword == "A" || l.keyword == "B" || l.keyword == "D") {
      if (l.args.empty()) throw ParseError(l.no, "missing term index");
      forms.push_back(l);
    } else if (!target.take(l)) {
      throw ParseError(l.no, "unknown keyword '" + l.keyword + "'");
    }
  }
  if (end_idx == lines.size()) throw ParseError(lines.back().no, "missing 'end'");
  expect_end(lines, end_idx);
  const std::size_t end_line = lines[end_idx].no;
  if (!rank) throw ParseError(end_line, "missing 'rank'");
  if (dec.is_mm() && target.dims) throw ParseError(end_line, "both 'problem' and 'dims' given");
  dec.target = dec.is_mm() ? dec.layout.trace_tensor() : target.build(end_line);
  const std::size_t dims[3] = {dec.target.dim_a(), dec.target.dim_b(), dec.target.dim_c()};

  dec.terms.assign(*rank, TrilinearTerm{});
  std::vector<std::array<bool, 3>> seen(*rank, {false, false, false});
  for (const auto& l : forms) {
    const std::size_t q = to_size(l, l.args[0]);
    if (q >= *rank) throw ParseError(l.no, "term index " + std::to_string(q) + " not below rank");
    const int role = l.keyword == "A" ? 0 : l.keyword == "B" ? 1 : 2;
    if (seen[q][role]) throw ParseError(l.no, "duplicate " + l.keyword + " line for term " + std::to_string(q));
    seen[q][role] = true;
    SparseForm f = parse_form(l);
    if (!f.empty() && f.max_index() >= dims[role]) throw ParseError(l.no, "variable index out of range");
    (role == 0 ? dec.terms[q].a : role == 1 ? dec.terms[q].b : dec.terms[q].d) = std::move(f);
  }
  if (dec.aggregate_terms > *rank) throw ParseError(end_line, "more aggregates than terms");
  return dec;
}

// ---------------------------------------------------------------------------
// apa

std::string write_apa(const APAAlgorithm& alg) {
  alg.check_consistent();
  std::ostringstream os;
  os << "apa\n";
  os << "name " << alg.name << '\n';
  for (const auto& s : alg.layout.problems) os << "problem " << s.m << ' ' << s.k << ' ' << s.n << '\n';
  os << "scale " << alg.scale << '\n';
  os << "degree " << alg.degree << '\n';
  os << "border_rank " << alg.border_rank() << '\n';
  auto emit = [&](char tag, std::size_t q, std::size_t idx, const LambdaPoly& p) {
    if (p.is_zero()) return;
    os << tag << ' ' << q << ' ' << idx;
    for (const auto& c : p.coefficients()) os << ' ' << c.get_str();
    os << '\n';
  };
  for (std::size_t q = 0; q < alg.border_rank(); ++q)
    for (std::size_t t = 0; t < alg.U.cols(); ++t) emit('U', q, t, alg.U(q, t));
  for (std::size_t q = 0; q < alg.border_rank(); ++q)
    for (std::size_t t = 0; t < alg.V.cols(); ++t) emit('V', q, t, alg.V(q, t));
  for (std::size_t q = 0; q < alg.border_rank(); ++q)
    for (std::size_t g = 0; g < alg.W.rows(); ++g) emit('W', q, g, alg.W(g, q));
  os << "end\n";
  return os.str();
}

APAAlgorithm read_apa(const std::string& text) {
  const auto lines = tokenize(text);
  expect_header(lines, "apa");
  APAAlgorithm alg;
  std::optional<std::size_t> rank;
  std::vector<Line> coeffs;
  std::size_t end_idx = lines.size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.keyword == "end") {
      end_idx = i;
      break;
    }
    if (l.keyword == "name") {
      alg.name = l.rest;
    } else if (l.keyword == "problem") {
      expect_args(l, 3);
      const MMShape s{to_size(l, l.args[0]), to_size(l, l.args[1]), to_size(l, l.args[2])};
      if (s.m == 0 || s.k == 0 || s.n == 0) throw ParseError(l.no, "problem dimensions must be positive");
      alg.layout.problems.push_back(s);
    } else if (l.keyword == "scale") {
      expect_args(l, 1);
      alg.scale = static_cast<int>(to_long(l, l.args[0]));
    } else if (l.keyword == "degree") {
      expect_args(l, 1);
      alg.degree = static_cast<int>(to_size(l, l.args[0]));
    } else if (l.keyword == "border_rank") {
      expect_args(l, 1);
      rank = to_size(l, l.args[0]);
      if (*rank == 0) throw ParseError(l.no, "border_rank must be positive");
    } else if (l.keyword == "U" || l.keyword == "V" || l.keyword == "W") {
      if (l.args.size() < 3) throw ParseError(l.no, "'" + l.keyword + "' needs a term, an index and coefficients");
      coeffs.push_back(l);
    } else {
      throw ParseError(l.no, "unknown keyword '" + l.keyword + "'");
    }
  }
  if (end_idx == lines.size()) throw ParseError(lines.back().no, "missing 'end'");
  expect_end(lines, end_idx);
  const std::size_t end_line = lines[end_idx].no;
  if (!rank) throw ParseError(end_line, "missing 'border_rank'");
  if (alg.layout.problems.empty()) throw ParseError(end_line, "missing 'problem'");
  alg.U = Matrix<LambdaPoly>(*rank, alg.layout.dim_a(), LambdaPoly{});
  alg.V = Matrix<LambdaPoly>(*rank, alg.layout.dim_b(), LambdaPoly{});
  alg.W = Matrix<LambdaPoly>(alg.layout.dim_d(), *rank, LambdaPoly{});
  for (const auto& l : coeffs) {
    const std::size_t q = to_size(l, l.args[0]), t = to_size(l, l.args[1]);
    std::vector<Integer> c;
    for (std::size_t a = 2; a < l.args.size(); ++a) c.push_back(to_integer(l, l.args[a]));
    LambdaPoly p(std::move(c));
    if (l.keyword == "U") put(alg.U, q, t, p, l, "U");
    else if (l.keyword == "V") put(alg.V, q, t, p, l, "V");
    else put(alg.W, t, q, p, l, "W");
  }
  return alg;
}

std::string detect_format(const std::string& text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(0, "empty input");
  const auto& k = lines.front().keyword;
  if (k == "bilinear" || k == "trilinear" || k == "apa") return k;
  throw ParseError(lines.front().no, "unknown format '" + k + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fastmm
