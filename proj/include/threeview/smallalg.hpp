#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <utility>

#include "threeview/mat.hpp"

namespace threeview::smallalg {

template <class S>
Mat3<S> cross_matrix(const Vec3<S>& c) {
  const S z = scalar_traits<S>::zero();
  Mat3<S> r;
  r(0, 0) = z;
  r(0, 1) = -c[2];
  r(0, 2) = c[1];
  r(1, 0) = c[2];
  r(1, 1) = z;
  r(1, 2) = -c[0];
  r(2, 0) = -c[1];
  r(2, 1) = c[0];
  r(2, 2) = z;
  return r;
}

template <class S>
S det3(const Mat3<S>& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Transpose of the cofactor matrix; adj(M)*M = det(M)*I in any commutative ring.
template <class S>
Mat3<S> adjugate(const Mat3<S>& a) {
  Mat3<S> r;
  r(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  r(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  r(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  r(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  r(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  r(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  r(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  r(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  r(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return r;
}

template <class S>
Mat3<S> inverse3(const Mat3<S>& a) {
  S d = det3(a);
  if (scalar_traits<S>::is_zero(d)) throw RankError("inverse3: singular matrix");
  S inv = scalar_traits<S>::one() / d;
  return inv * adjugate(a);
}

// ---- exact elimination helpers ----------------------------------------------

template <class S>
int rank_exact(MatX<S> a) {
  static_assert(is_exact_field<S>);
  int r = 0;
  for (int col = 0; col < a.cols && r < a.rows; ++col) {
    int piv = -1;
    for (int row = r; row < a.rows; ++row)
      if (!scalar_traits<S>::is_zero(a(row, col))) {
        piv = row;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < a.cols; ++j) std::swap(a(r, j), a(piv, j));
    for (int row = 0; row < a.rows; ++row) {
      if (row == r || scalar_traits<S>::is_zero(a(row, col))) continue;
      S f = a(row, col) / a(r, col);
      for (int j = col; j < a.cols; ++j) a(row, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

template <class S>
S det_exact(MatX<S> a) {
  static_assert(is_exact_field<S>);
  const int n = a.rows;
  S det = scalar_traits<S>::one();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int row = col; row < n; ++row)
      if (!scalar_traits<S>::is_zero(a(row, col))) {
        piv = row;
        break;
      }
    if (piv < 0) return scalar_traits<S>::zero();
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      det = -det;
    }
    det *= a(col, col);
    for (int row = col + 1; row < n; ++row) {
      if (scalar_traits<S>::is_zero(a(row, col))) continue;
      S f = a(row, col) / a(col, col);
      for (int j = col; j < n; ++j) a(row, j) -= f * a(col, j);
    }
  }
  return det;
}

// Right-kernel basis of an exact matrix.
template <class S>
std::vector<std::vector<S>> kernel_exact(MatX<S> a) {
  static_assert(is_exact_field<S>);
  std::vector<int> piv_cols;
  int r = 0;
  for (int col = 0; col < a.cols && r < a.rows; ++col) {
    int piv = -1;
    for (int row = r; row < a.rows; ++row)
      if (!scalar_traits<S>::is_zero(a(row, col))) {
        piv = row;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < a.cols; ++j) std::swap(a(r, j), a(piv, j));
    S p = a(r, col);
    for (int j = 0; j < a.cols; ++j) a(r, j) = a(r, j) / p;
    for (int row = 0; row < a.rows; ++row) {
      if (row == r || scalar_traits<S>::is_zero(a(row, col))) continue;
      S f = a(row, col);
      for (int j = 0; j < a.cols; ++j) a(row, j) -= f * a(r, j);
    }
    piv_cols.push_back(col);
    ++r;
  }
  std::vector<std::vector<S>> basis;
  for (int fc = 0; fc < a.cols; ++fc) {
    if (std::find(piv_cols.begin(), piv_cols.end(), fc) != piv_cols.end()) continue;
    std::vector<S> v(a.cols, scalar_traits<S>::zero());
    v[fc] = scalar_traits<S>::one();
    for (size_t i = 0; i < piv_cols.size(); ++i) v[piv_cols[i]] = -a(int(i), fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---- float helpers (Eigen-backed) -------------------------------------------

inline Eigen::MatrixXcd to_eigen(const MatX<Complex>& a) {
  Eigen::MatrixXcd e(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) e(i, j) = a(i, j);
  return e;
}

inline Eigen::VectorXd singular_values(const MatX<Complex>& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(to_eigen(a)).singularValues();
}

inline int rank_float(const MatX<Complex>& a, double tol) {
  auto sv = singular_values(a);
  if (sv.size() == 0 || sv(0) <= 0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++r;
  return r;
}

// ---- the module surface ------------------------------------------------------

inline constexpr double kDefaultRankTol = 1e-8;

template <class S>
int numeric_rank(const MatX<S>& a, double tol = kDefaultRankTol) {
  if constexpr (is_exact_field<S>) {
    (void)tol;
    return rank_exact(a);
  } else {
    return rank_float(a, tol);
  }
}

template <class S>
int numeric_rank(const Mat3<S>& a, double tol = kDefaultRankTol) {
  return numeric_rank(to_matx(a), tol);
}
template <class S>
int numeric_rank(const Mat9<S>& a, double tol = kDefaultRankTol) {
  return numeric_rank(to_matx(a), tol);
}

// Nonzero v with M v = 0, for rank-2 M only.
// Exact field: last nonzero coordinate scaled to 1.
// Float field: unit norm, first significant coordinate rotated to be real nonnegative.
template <class S>
Vec3<S> kernel_vector(const Mat3<S>& m, double tol = kDefaultRankTol) {
  if constexpr (is_exact_field<S>) {
    (void)tol;
    if (rank_exact(to_matx(m)) != 2) throw RankError("kernel_vector: rank != 2");
    auto basis = kernel_exact(to_matx(m));
    Vec3<S> v{basis[0][0], basis[0][1], basis[0][2]};
    for (int i = 2; i >= 0; --i) {
      if (!scalar_traits<S>::is_zero(v[i])) {
        S inv = scalar_traits<S>::one() / v[i];
        return {inv * v[0], inv * v[1], inv * v[2]};
      }
    }
    throw RankError("kernel_vector: zero kernel vector");
  } else {
    Eigen::Matrix3cd e;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) e(i, j) = m(i, j);
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(e, Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    if (!(sv(1) > tol * sv(0)) || sv(2) > tol * sv(0))
      throw RankError("kernel_vector: rank != 2");
    Eigen::Vector3cd v = svd.matrixV().col(2);
    v.normalize();
    for (int i = 0; i < 3; ++i) {
      if (std::abs(v(i)) > 1e-7) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    return {v(0), v(1), v(2)};
  }
}

namespace detail {

template <class S, size_t N>
bool proj_equal_flat(const std::array<S, N>& u, const std::array<S, N>& v, double tol) {
  bool uz = true, vz = true;
  for (auto& x : u) uz = uz && scalar_traits<S>::is_zero(x);
  for (auto& x : v) vz = vz && scalar_traits<S>::is_zero(x);
  if constexpr (!is_exact_field<S>) {
    double nu = 0, nv = 0;
    for (auto& x : u) nu += std::norm(x);
    for (auto& x : v) nv += std::norm(x);
    uz = nu == 0;
    vz = nv == 0;
    if (uz || vz) throw ZeroInputError("proj_equal: zero input");
    double bound = tol * std::sqrt(nu) * std::sqrt(nv);
    for (size_t i = 0; i < N; ++i)
      for (size_t j = i + 1; j < N; ++j)
        if (std::abs(u[i] * v[j] - u[j] * v[i]) > bound) return false;
    return true;
  } else {
    if (uz || vz) throw ZeroInputError("proj_equal: zero input");
    for (size_t i = 0; i < N; ++i)
      for (size_t j = i + 1; j < N; ++j)
        if (!scalar_traits<S>::is_zero(u[i] * v[j] - u[j] * v[i])) return false;
    return true;
  }
}

}  // namespace detail

template <class S>
bool proj_equal(const Vec3<S>& u, const Vec3<S>& v, double tol = kDefaultRankTol) {
  return detail::proj_equal_flat(u.v, v.v, tol);
}

template <class S>
bool proj_equal(const Mat3<S>& u, const Mat3<S>& v, double tol = kDefaultRankTol) {
  return detail::proj_equal_flat(u.m, v.m, tol);
}

}  // namespace threeview::smallalg
