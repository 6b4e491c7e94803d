#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace threeview {

using Rational = mpq_class;
using Complex = std::complex<double>;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Exact a + bi with rational a, b. Field operations only (no ordering).
struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r), im(0) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("division by zero GaussianRational");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline GaussianRational gauss_i() { return {Rational(0), Rational(1)}; }

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static bool is_zero(const Rational& x) { return x == 0; }
  static Rational conj(const Rational& x) { return x; }
  static double abs_approx(const Rational& x) { return std::abs(x.get_d()); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_int(long v) { return {double(v), 0.0}; }
  static bool is_zero(const Complex& x) { return x == 0.0; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static double abs_approx(const Complex& x) { return std::abs(x); }
};

template <>
struct scalar_traits<GaussianRational> {
  static constexpr bool exact = true;
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return {Rational(1)}; }
  static GaussianRational from_int(long v) { return {Rational(v)}; }
  static bool is_zero(const GaussianRational& x) { return x.re == 0 && x.im == 0; }
  static GaussianRational conj(const GaussianRational& x) { return {x.re, -x.im}; }
  static double abs_approx(const GaussianRational& x) {
    return std::abs(std::complex<double>(x.re.get_d(), x.im.get_d()));
  }
};

template <class S>
inline constexpr bool is_exact_field = scalar_traits<S>::exact;

inline Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
inline Complex to_complex(const GaussianRational& x) { return {x.re.get_d(), x.im.get_d()}; }
inline Complex to_complex(const Complex& x) { return x; }

// Shared error vocabulary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankError : Error {
  using Error::Error;
};
struct ZeroInputError : Error {
  using Error::Error;
};
struct CoincidentCentersError : Error {
  using Error::Error;
};
struct ZeroScaleError : Error {
  using Error::Error;
};
struct IsotropicCenterError : Error {
  using Error::Error;
};
struct ZeroCenterError : Error {
  using Error::Error;
};
struct SamplerDegenerateError : Error {
  using Error::Error;
};
struct RationalizationError : Error {
  using Error::Error;
};
struct InvariantError : Error {
  using Error::Error;
};

}  // namespace threeview
