// fastmm command-line harness.
// Exit codes: 0 success/PASS, 1 verification or cross-check failure, 2 usage error.

#include "CLI11.hpp"

#include "fastmm/aggregation.hpp"
#include "fastmm/apa.hpp"
#include "fastmm/binseg.hpp"
#include "fastmm/catalog.hpp"
#include "fastmm/history.hpp"
#include "fastmm/serialize.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace fastmm;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FASTMM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric FASTMM_SEED\n";
    }
  }
  return 1;
}

// ---------------------------------------------------------------------------
// multiply

struct MultiplyOptions {
  std::string alg = "strassen";
  std::size_t n = 0;
  std::optional<std::size_t> cutoff;
  std::string ring = "int";
  std::uint64_t seed = 1;
  std::string csv;
};

template <class T>
T random_entry(std::mt19937_64& gen);
template <>
Integer random_entry<Integer>(std::mt19937_64& gen) {
  return Integer(std::uniform_int_distribution<long>(-9, 9)(gen));
}
template <>
Rational random_entry<Rational>(std::mt19937_64& gen) {
  Rational q{Integer(std::uniform_int_distribution<long>(-9, 9)(gen)),
             Integer(std::uniform_int_distribution<long>(1, 9)(gen))};
  q.canonicalize();
  return q;
}
template <>
double random_entry<double>(std::mt19937_64& gen) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
}

template <class T>
Matrix<T> random_matrix(std::size_t n, std::mt19937_64& gen) {
  std::vector<T> e;
  e.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) e.push_back(random_entry<T>(gen));
  return Matrix<T>(n, n, std::move(e));
}

void append_csv(const std::string& path, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open CSV '" + path + "'");
  if (fresh) out << "alg,n,cutoff,mults,adds,wall_ns,ratio\n";
  out << row << '\n';
}

template <class T>
int run_multiply(const MultiplyOptions& o) {
  std::mt19937_64 gen(o.seed);
  const auto a = random_matrix<T>(o.n, gen), b = random_matrix<T>(o.n, gen);
  const std::size_t cutoff = o.cutoff.value_or(RingTraits<T>::exact ? 1 : 64);
  if (cutoff == 0) throw UsageError("--cutoff must be at least 1");

  OpCounter ctr;
  const auto start = std::chrono::steady_clock::now();
  Matrix<T> c;
  if (o.alg == "naive") c = mm_naive(a, b, ctr);
  else c = multiply(catalog::by_name(o.alg), a, b, cutoff, ctr);
  const auto wall_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();

  const double cube = static_cast<double>(o.n) * static_cast<double>(o.n) * static_cast<double>(o.n);
  const double ratio = static_cast<double>(ctr.mults) / cube;
  std::cout << "alg=" << o.alg << " n=" << o.n << " cutoff=" << cutoff << " ring=" << o.ring << " mults=" << ctr.mults
            << " adds=" << ctr.adds << " wall_ns=" << wall_ns << " ratio=" << std::setprecision(12) << ratio << '\n';

  int status = kOk;
  if (o.alg != "naive") {
    OpCounter ignored;
    const auto ref = mm_naive(a, b, ignored);
    if constexpr (RingTraits<T>::exact) {
      for (std::size_t i = 0; i < o.n && status == kOk; ++i)
        for (std::size_t j = 0; j < o.n; ++j)
          if (c(i, j) != ref(i, j)) {
            std::cout << "MISMATCH at (" << i << "," << j << "): got " << RingTraits<T>::to_string(c(i, j))
                      << ", expected " << RingTraits<T>::to_string(ref(i, j)) << '\n';
            status = kFail;
            break;
          }
      if (status == kOk) std::cout << "check: PASS (exact)\n";
    } else {
      double err = 0;
      for (std::size_t t = 0; t < c.size(); ++t) err = std::max(err, std::fabs(c.entries()[t] - ref.entries()[t]));
      std::cout << "check: max abs deviation from naive " << std::scientific << err << std::defaultfloat << '\n';
    }
  }
  if (!o.csv.empty()) {
    std::ostringstream row;
    row << o.alg << ',' << o.n << ',' << cutoff << ',' << ctr.mults << ',' << ctr.adds << ',' << wall_ns << ','
        << std::setprecision(12) << ratio;
    append_csv(o.csv, row.str());
  }
  return status;
}

int cmd_multiply(const MultiplyOptions& o) {
  if (o.n == 0) throw UsageError("--n must be positive");
  if (o.ring == "int") return run_multiply<Integer>(o);
  if (o.ring == "rat") return run_multiply<Rational>(o);
  return run_multiply<double>(o);
}

// ---------------------------------------------------------------------------
// verify

int report(const VerifyResult& r) {
  std::cout << r.describe() << '\n';
  return r ? kOk : kFail;
}

int cmd_verify(const std::string& file, const std::string& builtin) {
  if (file.empty() == builtin.empty()) throw UsageError("give exactly one of --file or --builtin");
  if (!builtin.empty()) return report(verify(catalog::by_name(builtin)));
  const std::string text = read_text_file(file);
  const std::string kind = detect_format(text);
  if (kind == "bilinear") return report(verify(read_bilinear(text)));
  if (kind == "trilinear") return report(verify(read_trilinear(text)));
  const auto res = apa_symbolic_check(read_apa(text));
  std::cout << (res ? std::string("PASS") : "FAIL " + res.message) << '\n';
  return res ? kOk : kFail;
}

// ---------------------------------------------------------------------------
// exponent

int cmd_exponent(std::size_t m, std::size_t k, std::size_t n, double rank, bool apa, bool history, std::size_t powers,
                 std::size_t degree) {
  std::cout << std::fixed << std::setprecision(7);
  if (history) {
    std::cout << history_csv();
    return kOk;
  }
  if (m == 0 || k == 0 || n == 0) throw UsageError("--m, --k and --n are required");
  if (apa) {
    std::cout << apa_exponent(m, k, n) << '\n';
    if (powers > 0) {
      const double border = 0.5 * static_cast<double>(m * k * n + m * k + k * n);
      std::cout << "after " << powers << " self-applications (degree " << degree
                << "): " << apa_effective_exponent(m, k, n, border, degree, powers) << '\n';
    }
    return kOk;
  }
  if (rank <= 0) throw UsageError("--rank is required without --apa or --history");
  std::cout << exponent_from_rank(m, k, n, rank) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// aggregate

int cmd_aggregate(const std::string& mode, std::size_t m, std::size_t k, std::size_t n, const std::string& out) {
  if (m == 0 || k == 0 || n == 0) throw UsageError("--m, --k and --n must be positive");
  std::string text;
  if (mode == "two") {
    const auto dec = aggregate_two(m, k, n);
    std::cout << "rank " << dec.rank() << " (aggregates " << dec.aggregate_terms << ", corrections "
              << dec.rank() - dec.aggregate_terms << "), verified\n";
    text = write_trilinear(dec);
  } else if (mode == "three") {
    AggregateThreeReport rep;
    const auto dec = aggregate_three(m, k, n, &rep);
    std::cout << "rank " << dec.rank() << " (aggregates " << rep.aggregates << ", corrections " << rep.corrections()
              << " = " << rep.pair_corrections << " pair + " << rep.cross_corrections << " cross), verified\n";
    text = write_trilinear(dec);
  } else {
    const auto alg = apa_aggregate(m, k, n);
    std::cout << "border_rank " << alg.border_rank() << " degree " << alg.degree << ", symbolic check passed\n";
    text = write_apa(alg);
  }
  if (!out.empty()) write_text_file(out, text);
  return kOk;
}

// ---------------------------------------------------------------------------
// binseg

std::vector<binseg::Digit> parse_list(const std::string& s, const char* what) {
  std::vector<binseg::Digit> v;
  std::stringstream ss(s);
  std::string tok;
  std::size_t idx = 0;
  while (std::getline(ss, tok, ',')) {
    const auto first = tok.find_first_not_of(" \t");
    tok = first == std::string::npos ? "" : tok.substr(first, tok.find_last_not_of(" \t") - first + 1);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError(std::string(what) + "[" + std::to_string(idx) + "]: '" + tok + "' is not a nonnegative integer");
    try {
      v.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + "[" + std::to_string(idx) + "]: '" + tok + "' exceeds 64 bits");
    }
    ++idx;
  }
  if (v.empty()) throw UsageError(std::string(what) + " is empty");
  return v;
}

std::size_t bits_of(const std::vector<binseg::Digit>& v) {
  std::size_t b = 1;
  for (auto x : v)
    while (b < 64 && (x >> b) != 0) ++b;
  return b;
}

std::string join(const std::vector<binseg::Digit>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct BinsegOptions {
  std::string op;
  std::string file, u, v;
  std::vector<std::size_t> random;
  std::optional<std::size_t> g, h;
  std::uint64_t seed = 1;
};

int cmd_binseg(BinsegOptions o) {
  std::vector<binseg::Digit> u, v;
  std::size_t g = 0, h = 0;
  if (!o.random.empty()) {
    if (o.random.size() != 3) throw UsageError("--random expects n g h");
    const std::size_t n = o.random[0];
    g = o.random[1];
    h = o.random[2];
    if (n == 0 || g > 63 || h > 63) throw UsageError("--random needs n >= 1 and g, h <= 63");
    std::mt19937_64 gen(o.seed);
    auto draw = [&](std::size_t bits) { return bits == 0 ? 0 : gen() & ((binseg::Digit(1) << bits) - 1); };
    for (std::size_t i = 0; i < n; ++i) u.push_back(draw(g));
    for (std::size_t i = 0; i < n; ++i) v.push_back(draw(h));
  } else {
    if (!o.file.empty()) {
      std::istringstream in(read_text_file(o.file));
      std::getline(in, o.u);
      std::getline(in, o.v);
    }
    if (o.u.empty()) throw UsageError("need --u/--v, --file or --random");
    u = parse_list(o.u, "u");
    if (o.op != "sum") {
      if (o.v.empty()) throw UsageError("--op " + o.op + " needs a second vector");
      v = parse_list(o.v, "v");
    }
    g = o.g.value_or(bits_of(u));
    h = o.h.value_or(o.op == "sum" ? bits_of(u) : bits_of(v));
  }

  binseg::Stats st;
  bool ok = true;
  if (o.op == "inner") {
    if (u.size() != v.size()) throw UsageError("u and v differ in length");
    const auto got = binseg::inner_product(u, v, g, h, &st);
    binseg::Digit want = 0;
    for (std::size_t i = 0; i < u.size(); ++i) want += u[i] * v[i];
    ok = got == want;
    std::cout << "result " << got << "\noracle " << want << '\n';
  } else if (o.op == "sum") {
    // --random n g h sums the h-bit vector; explicit input sums --u.
    const auto& vec = o.random.empty() ? u : v;
    const auto got = binseg::sum(vec, h, &st);
    binseg::Digit want = 0;
    for (auto x : vec) want += x;
    ok = got == want;
    std::cout << "result " << got << "\noracle " << want << '\n';
  } else {
    const std::size_t bound = std::max(g, h);
    const auto got = binseg::poly_mult(u, v, bound, &st);
    const auto want = binseg::convolve_schoolbook(u, v);
    ok = got == want;
    std::cout << "result " << join(got) << "\noracle " << join(want) << '\n';
  }
  std::cout << "radix_bits=" << st.radix_bits << " lhs_bits=" << st.lhs_bits << " rhs_bits=" << st.rhs_bits
            << " product_bits=" << st.product_bits << " long_mults=" << st.long_mults << '\n';
  std::cout << (ok ? "check: PASS" : "check: FAIL") << '\n';
  return ok ? kOk : kFail;
}

int cmd_export(const std::string& builtin, const std::string& out) {
  const std::string text = write_bilinear(catalog::by_name(builtin));
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast matrix multiplication toolkit: bilinear algorithms, aggregation, APA, binary segmentation"};
  app.require_subcommand(1);
  const std::uint64_t seed0 = default_seed();

  MultiplyOptions mo;
  mo.seed = seed0;
  auto* mul = app.add_subcommand("multiply", "Multiply random matrices and report operation counts");
  mul->add_option("--alg", mo.alg, "naive, strassen or winograd")->check(CLI::IsMember({"naive", "strassen", "winograd"}));
  mul->add_option("--n", mo.n, "Matrix size")->required();
  mul->add_option("--cutoff", mo.cutoff, "Switch to naive at or below this size (default 1 exact, 64 f64)");
  mul->add_option("--ring", mo.ring, "int, rat or f64")->check(CLI::IsMember({"int", "rat", "f64"}));
  mul->add_option("--seed", mo.seed, "Random seed (default $FASTMM_SEED or 1)");
  mul->add_option("--csv", mo.csv, "Append a row to this CSV file");

  std::string vfile, vbuiltin;
  auto* ver = app.add_subcommand("verify", "Check an algorithm against its target tensor");
  auto* vf = ver->add_option("--file", vfile, "Algorithm text file");
  auto* vb = ver->add_option("--builtin", vbuiltin, "Catalog name");
  vf->excludes(vb);

  std::size_t em = 0, ek = 0, en = 0, powers = 0, degree = 2;
  double rank = 0;
  bool apa = false, hist = false;
  auto* ex = app.add_subcommand("exponent", "Exponent bounds and the exponent history table");
  ex->add_option("--m", em);
  ex->add_option("--k", ek);
  ex->add_option("--n", en);
  ex->add_option("--rank", rank);
  ex->add_flag("--apa", apa, "Use 3 log_{mkn}(0.5(mkn+mk+kn))");
  ex->add_option("--powers", powers, "With --apa: also show the bound after this many self-applications");
  ex->add_option("--degree", degree, "Lambda degree for --powers (default 2)");
  ex->add_flag("--history", hist, "Print the recorded exponents as CSV");

  std::string amode = "two", aout;
  std::size_t am = 0, ak = 0, an = 0;
  auto* ag = app.add_subcommand("aggregate", "Generate a verified aggregation decomposition");
  ag->add_option("--mode", amode, "two, three or apa")->check(CLI::IsMember({"two", "three", "apa"}));
  ag->add_option("--m", am)->required();
  ag->add_option("--k", ak)->required();
  ag->add_option("--n", an)->required();
  ag->add_option("--out", aout, "Write the decomposition here");

  BinsegOptions bo;
  bo.seed = seed0;
  auto* bs = app.add_subcommand("binseg", "Binary segmentation: one long multiplication");
  bs->set_help_flag("--help", "Print this help message and exit");  // -h is taken by --h
  bs->add_option("--op", bo.op, "inner, sum or conv")->required()->check(CLI::IsMember({"inner", "sum", "conv"}));
  bs->add_option("--file", bo.file, "Two lines of comma-separated values");
  bs->add_option("--u", bo.u, "First vector, comma-separated");
  bs->add_option("--v", bo.v, "Second vector, comma-separated");
  bs->add_option("--random", bo.random, "n g h")->expected(3);
  bs->add_option("--g", bo.g, "Bits of the first vector's entries");
  bs->add_option("--h", bo.h, "Bits of the second vector's entries");
  bs->add_option("--seed", bo.seed);

  std::string xb, xout;
  auto* xp = app.add_subcommand("export", "Write a catalog algorithm in text form");
  xp->add_option("--builtin", xb)->required();
  xp->add_option("--out", xout);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*mul) return cmd_multiply(mo);
    if (*ver) return cmd_verify(vfile, vbuiltin);
    if (*ex) return cmd_exponent(em, ek, en, rank, apa, hist, powers, degree);
    if (*ag) return cmd_aggregate(amode, am, ak, an, aout);
    if (*bs) return cmd_binseg(bo);
    if (*xp) return cmd_export(xb, xout);
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kFail;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
