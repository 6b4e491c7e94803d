#pragma once

#include <array>
#include <string>

#include "threeview/camera.hpp"

namespace threeview::epipolar {

using camera::FundamentalTriple;
using smallalg::kernel_vector;
using smallalg::numeric_rank;
using smallalg::proj_equal;

// e_ji ~ ker(F_ij), e_ij ~ ker(F_ij^T); projective representatives normalized
// by the smallalg kernel convention.
template <class S>
struct EpipoleSet {
  Vec3<S> e12, e13, e21, e23, e31, e32;
};

enum class Collinearity { Noncollinear, Collinear, Mixed };
enum class HZ { Compatible, Incompatible, Inapplicable };

inline const char* to_string(Collinearity c) {
  switch (c) {
    case Collinearity::Noncollinear: return "noncollinear";
    case Collinearity::Collinear: return "collinear";
    default: return "mixed";
  }
}
inline const char* to_string(HZ v) {
  switch (v) {
    case HZ::Compatible: return "compatible";
    case HZ::Incompatible: return "incompatible";
    default: return "inapplicable";
  }
}

template <class S>
EpipoleSet<S> epipoles(const FundamentalTriple<S>& t, double tol = smallalg::kDefaultRankTol) {
  auto kern = [&](const Mat3<S>& m, const char* name) {
    try {
      return kernel_vector(m, tol);
    } catch (const RankError&) {
      throw RankError(std::string("epipoles: factor ") + name + " does not have rank 2");
    }
  };
  EpipoleSet<S> e;
  e.e21 = kern(t.F12, "F12");
  e.e12 = kern(t.F12.transposed(), "F12^T");
  e.e31 = kern(t.F13, "F13");
  e.e13 = kern(t.F13.transposed(), "F13^T");
  e.e32 = kern(t.F23, "F23");
  e.e23 = kern(t.F23.transposed(), "F23^T");
  return e;
}

template <class S>
Collinearity collinearity_status(const EpipoleSet<S>& e, double tol = smallalg::kDefaultRankTol) {
  bool p1 = proj_equal(e.e12, e.e13, tol);
  bool p2 = proj_equal(e.e21, e.e23, tol);
  bool p3 = proj_equal(e.e31, e.e32, tol);
  if (!p1 && !p2 && !p3) return Collinearity::Noncollinear;
  if (p1 && p2 && p3) return Collinearity::Collinear;
  return Collinearity::Mixed;
}

// (e13^T F12 e23, e12^T F13 e32, e21^T F23 e31)
template <class S>
std::array<S, 3> triangulation_residuals(const FundamentalTriple<S>& t, const EpipoleSet<S>& e) {
  return {dot(e.e13, t.F12 * e.e23), dot(e.e12, t.F13 * e.e32), dot(e.e21, t.F23 * e.e31)};
}

template <class S>
HZ hz_compatible(const FundamentalTriple<S>& t, double tol = smallalg::kDefaultRankTol) {
  EpipoleSet<S> e;
  try {
    e = epipoles(t, tol);
  } catch (const RankError&) {
    return HZ::Inapplicable;
  }
  if (collinearity_status(e, tol) != Collinearity::Noncollinear) return HZ::Inapplicable;
  auto res = triangulation_residuals(t, e);
  for (int k = 0; k < 3; ++k) {
    if constexpr (is_exact_field<S>) {
      if (!scalar_traits<S>::is_zero(res[k])) return HZ::Incompatible;
    } else {
      if (scalar_traits<S>::abs_approx(res[k]) > tol * t.factor(k).frobenius())
        return HZ::Incompatible;
    }
  }
  return HZ::Compatible;
}

namespace detail {

// v in column space of M <=> rank([M | v]) <= 2
template <class S>
bool in_column_space(const Mat3<S>& m, const Vec3<S>& v, double tol) {
  MatX<S> a(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = m(i, j);
    a(i, 3) = v[i];
  }
  return numeric_rank(a, tol) <= 2;
}

}  // namespace detail

// The six pencil conditions F_ij e_jk in im(F_ik), in the order
// (1,2,3), (1,3,2), (2,3,1), (2,1,3), (3,1,2), (3,2,1) for (i,j,k).
template <class S>
std::array<bool, 6> line_membership_check(const FundamentalTriple<S>& t, const EpipoleSet<S>& e,
                                          double tol = smallalg::kDefaultRankTol) {
  for (int k = 0; k < 3; ++k)
    if (numeric_rank(t.factor(k), tol) != 2)
      throw RankError("line_membership_check: factor rank != 2");
  const Mat3<S> F12 = t.F12, F13 = t.F13, F23 = t.F23;
  const Mat3<S> F21 = F12.transposed(), F31 = F13.transposed(), F32 = F23.transposed();
  return {
      detail::in_column_space(F13, F12 * e.e23, tol), detail::in_column_space(F12, F13 * e.e32, tol),
      detail::in_column_space(F21, F23 * e.e31, tol), detail::in_column_space(F23, F21 * e.e13, tol),
      detail::in_column_space(F32, F31 * e.e12, tol), detail::in_column_space(F31, F32 * e.e21, tol),
  };
}

}  // namespace threeview::epipolar
