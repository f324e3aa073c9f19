#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace fastmm {

using Integer = mpz_class;
using Rational = mpq_class;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CoefficientError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ring instances usable as matrix entries. Each specialization provides
// zero/one, conversion of an exact algorithm coefficient into the ring,
// and an exactness flag.
template <class T>
struct RingTraits;

template <>
struct RingTraits<Integer> {
  static constexpr bool exact = true;
  static Integer zero() { return Integer(0); }
  static Integer one() { return Integer(1); }
  static bool representable(const Rational& c) { return c.get_den() == 1; }
  static Integer from_coefficient(const Rational& c) {
    if (!representable(c))
      throw CoefficientError("coefficient " + c.get_str() + " is not an integer");
    return c.get_num();
  }
  static std::string to_string(const Integer& x) { return x.get_str(); }
};

template <>
struct RingTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool representable(const Rational&) { return true; }
  static Rational from_coefficient(const Rational& c) { return c; }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <>
struct RingTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool representable(const Rational&) { return true; }
  static double from_coefficient(const Rational& c) { return c.get_d(); }
  static std::string to_string(double x) { return std::to_string(x); }
};

template <class T>
concept Ring = requires { RingTraits<T>::exact; };

inline Rational make_rational(long num, long den = 1) {
  Rational q{Integer(num), Integer(den)};
  q.canonicalize();
  return q;
}

}  // namespace fastmm
