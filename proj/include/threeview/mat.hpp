#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "threeview/scalar.hpp"

namespace threeview {

template <class S>
struct Vec3 {
  std::array<S, 3> v{scalar_traits<S>::zero(), scalar_traits<S>::zero(), scalar_traits<S>::zero()};

  Vec3() = default;
  Vec3(S x, S y, S z) : v{std::move(x), std::move(y), std::move(z)} {}

  S& operator[](int i) { return v[i]; }
  const S& operator[](int i) const { return v[i]; }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend Vec3 operator*(const S& s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
  friend bool operator==(const Vec3& a, const Vec3& b) { return a.v == b.v; }

  bool is_zero() const {
    return scalar_traits<S>::is_zero(v[0]) && scalar_traits<S>::is_zero(v[1]) &&
           scalar_traits<S>::is_zero(v[2]);
  }
};

template <class S>
S dot(const Vec3<S>& a, const Vec3<S>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class S>
Vec3<S> cross(const Vec3<S>& a, const Vec3<S>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class S>
struct Mat3 {
  std::array<S, 9> m;

  Mat3() { m.fill(scalar_traits<S>::zero()); }
  explicit Mat3(std::array<S, 9> a) : m(std::move(a)) {}

  static Mat3 identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = scalar_traits<S>::one();
    return r;
  }
  static Mat3 from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    Mat3 r;
    int i = 0;
    for (auto& row : rows) {
      int j = 0;
      for (long x : row) r(i, j++) = scalar_traits<S>::from_int(x);
      ++i;
    }
    return r;
  }

  S& operator()(int r, int c) { return m[3 * r + c]; }
  const S& operator()(int r, int c) const { return m[3 * r + c]; }

  friend Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
  }
  friend Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
  }
  friend Mat3 operator*(const S& s, const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
    return r;
  }
  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        S acc = a(i, 0) * b(0, j);
        acc += a(i, 1) * b(1, j);
        acc += a(i, 2) * b(2, j);
        r(i, j) = std::move(acc);
      }
    return r;
  }
  friend Vec3<S> operator*(const Mat3& a, const Vec3<S>& x) {
    Vec3<S> r;
    for (int i = 0; i < 3; ++i) r[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2];
    return r;
  }
  friend bool operator==(const Mat3& a, const Mat3& b) { return a.m == b.m; }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
  S trace() const { return m[0] + m[4] + m[8]; }
  bool is_zero() const {
    for (auto& x : m)
      if (!scalar_traits<S>::is_zero(x)) return false;
    return true;
  }
  double frobenius() const {
    double s = 0;
    for (auto& x : m) {
      double a = scalar_traits<S>::abs_approx(x);
      s += a * a;
    }
    return std::sqrt(s);
  }
};

// 9x9 matrix addressed by 3x3 blocks of Mat3, row-major entries.
template <class S>
struct Mat9 {
  std::array<S, 81> m;

  Mat9() { m.fill(scalar_traits<S>::zero()); }

  S& operator()(int r, int c) { return m[9 * r + c]; }
  const S& operator()(int r, int c) const { return m[9 * r + c]; }

  // blocks indexed 0..2
  void set_block(int br, int bc, const Mat3<S>& b) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) (*this)(3 * br + i, 3 * bc + j) = b(i, j);
  }
  Mat3<S> block(int br, int bc) const {
    Mat3<S> b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = (*this)(3 * br + i, 3 * bc + j);
    return b;
  }
  friend Mat9 operator*(const Mat9& a, const Mat9& b) {
    Mat9 r;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        S acc = scalar_traits<S>::zero();
        for (int k = 0; k < 9; ++k) acc += a(i, k) * b(k, j);
        r(i, j) = std::move(acc);
      }
    return r;
  }
  S trace() const {
    S t = scalar_traits<S>::zero();
    for (int i = 0; i < 9; ++i) t += (*this)(i, i);
    return t;
  }
  bool is_zero() const {
    for (auto& x : m)
      if (!scalar_traits<S>::is_zero(x)) return false;
    return true;
  }
};

// Small dynamic matrix for rank / kernel / minor work (exact fields mostly).
template <class S>
struct MatX {
  int rows = 0, cols = 0;
  std::vector<S> m;

  MatX() = default;
  MatX(int r, int c) : rows(r), cols(c), m(size_t(r) * c, scalar_traits<S>::zero()) {}

  S& operator()(int r, int c) { return m[size_t(r) * cols + c]; }
  const S& operator()(int r, int c) const { return m[size_t(r) * cols + c]; }
};

template <class S>
MatX<S> to_matx(const Mat3<S>& a) {
  MatX<S> r(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, j);
  return r;
}

template <class S>
MatX<S> to_matx(const Mat9<S>& a) {
  MatX<S> r(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) r(i, j) = a(i, j);
  return r;
}

template <class T, class S>
Vec3<T> convert_vec(const Vec3<S>& v) {
  return {T(to_complex(v[0])), T(to_complex(v[1])), T(to_complex(v[2]))};
}

inline Mat3<Complex> to_complex_mat(const Mat3<Rational>& a) {
  Mat3<Complex> r;
  for (int i = 0; i < 9; ++i) r.m[i] = to_complex(a.m[i]);
  return r;
}
inline Mat3<Complex> to_complex_mat(const Mat3<Complex>& a) { return a; }
inline Vec3<Complex> to_complex_vec(const Vec3<Rational>& v) {
  return {to_complex(v[0]), to_complex(v[1]), to_complex(v[2])};
}
inline Vec3<Complex> to_complex_vec(const Vec3<Complex>& v) { return v; }

}  // namespace threeview
