#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "threeview/smallalg.hpp"

namespace threeview::camera {

using smallalg::adjugate;
using smallalg::cross_matrix;
using smallalg::det3;
using smallalg::inverse3;

enum class Prior { F, E, Delta };
enum class ScaleTag { CanonicalAffine, Projective };

inline const char* to_string(Prior p) {
  switch (p) {
    case Prior::F: return "F";
    case Prior::E: return "E";
    default: return "Delta";
  }
}

template <class S>
struct Intrinsics {
  Mat3<S> K;

  explicit Intrinsics(Mat3<S> k) : K(std::move(k)) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j)
        if (!scalar_traits<S>::is_zero(K(i, j)))
          throw InvariantError("Intrinsics: not upper-triangular");
    if (scalar_traits<S>::abs_approx(det3(K)) == 0.0)
      throw InvariantError("Intrinsics: singular");
  }
  static Intrinsics identity() { return Intrinsics(Mat3<S>::identity()); }
};

template <class S>
struct Rotation {
  Mat3<S> R;

  explicit Rotation(Mat3<S> r) : R(std::move(r)) {
    Mat3<S> g = R.transposed() * R - Mat3<S>::identity();
    S d = det3(R) - scalar_traits<S>::one();
    if constexpr (is_exact_field<S>) {
      if (!g.is_zero() || !scalar_traits<S>::is_zero(d))
        throw InvariantError("Rotation: not in SO(3)");
    } else {
      if (g.frobenius() > 1e-12 || scalar_traits<S>::abs_approx(d) > 1e-12)
        throw InvariantError("Rotation: not in SO(3)");
    }
  }
  static Rotation identity() { return Rotation(Mat3<S>::identity()); }
};

template <class S>
struct Camera {
  Intrinsics<S> K;
  Rotation<S> R;
  Vec3<S> c;
};

template <class S>
struct CameraTriple {
  std::array<Camera<S>, 3> cams;
  Prior prior;

  CameraTriple(std::array<Camera<S>, 3> cs, Prior p) : cams(std::move(cs)), prior(p) {
    if (prior == Prior::E) {
      for (auto& cam : cams)
        if (!(cam.K.K == Mat3<S>::identity())) throw InvariantError("prior E requires K = I");
    }
    if (prior == Prior::Delta) {
      if (!(cams[0].K.K == cams[1].K.K) || !(cams[0].K.K == cams[2].K.K))
        throw InvariantError("prior Delta requires equal K");
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if ((cams[i].c - cams[j].c).is_zero())
          throw CoincidentCentersError("coincident camera centers");
  }
};

template <class S>
struct FundamentalTriple {
  Mat3<S> F12, F13, F23;
  ScaleTag tag = ScaleTag::Projective;

  const Mat3<S>& factor(int k) const { return k == 0 ? F12 : (k == 1 ? F13 : F23); }
  Mat3<S>& factor(int k) { return k == 0 ? F12 : (k == 1 ? F13 : F23); }
};

// F_ij = K_i^{-T} R_i [c_j - c_i]x R_j^T K_j^{-1}; rank 2 whenever c_i != c_j.
template <class S>
Mat3<S> fundamental_pair(const Intrinsics<S>& Ki, const Rotation<S>& Ri, const Vec3<S>& ci,
                         const Intrinsics<S>& Kj, const Rotation<S>& Rj, const Vec3<S>& cj) {
  if ((cj - ci).is_zero()) throw CoincidentCentersError("fundamental_pair: c_i = c_j");
  return inverse3(Ki.K).transposed() * Ri.R * cross_matrix(cj - ci) * Rj.R.transposed() *
         inverse3(Kj.K);
}

template <class S>
FundamentalTriple<S> triple_from_cameras(const CameraTriple<S>& ct) {
  const auto& c = ct.cams;
  FundamentalTriple<S> t;
  t.F12 = fundamental_pair(c[0].K, c[0].R, c[0].c, c[1].K, c[1].R, c[1].c);
  t.F13 = fundamental_pair(c[0].K, c[0].R, c[0].c, c[2].K, c[2].R, c[2].c);
  t.F23 = fundamental_pair(c[1].K, c[1].R, c[1].c, c[2].K, c[2].R, c[2].c);
  t.tag = ScaleTag::CanonicalAffine;
  return t;
}

// Image of camera center i in view j (homogeneous), P_j c_i-hat = K_j R_j (c_i - c_j).
template <class S>
Vec3<S> project_center(const Camera<S>& camj, const Vec3<S>& ci) {
  return camj.K.K * (camj.R.R * (ci - camj.c));
}

template <class S>
FundamentalTriple<S> rescale(const FundamentalTriple<S>& t, const S& u12, const S& u13,
                             const S& u23) {
  if (scalar_traits<S>::is_zero(u12) || scalar_traits<S>::is_zero(u13) ||
      scalar_traits<S>::is_zero(u23))
    throw ZeroScaleError("rescale: zero scale");
  FundamentalTriple<S> r;
  r.F12 = u12 * t.F12;
  r.F13 = u13 * t.F13;
  r.F23 = u23 * t.F23;
  r.tag = ScaleTag::Projective;
  return r;
}

// (R, c) -> (R (2 c c^T / c^T c - I), -c); involution preserving [c]x R^T up to scale.
template <class S>
std::pair<Rotation<S>, Vec3<S>> twisted_pair(const Rotation<S>& R, const Vec3<S>& c) {
  S q = dot(c, c);
  bool isotropic;
  if constexpr (is_exact_field<S>)
    isotropic = scalar_traits<S>::is_zero(q);
  else {
    double n2 = 0;
    for (int i = 0; i < 3; ++i) n2 += std::norm(c[i]);
    isotropic = scalar_traits<S>::abs_approx(q) <= 1e-12 * n2;
  }
  if (isotropic) throw IsotropicCenterError("twisted_pair: c^T c = 0");
  Mat3<S> H;
  S two_over_q = scalar_traits<S>::from_int(2) / q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) H(i, j) = two_over_q * c[i] * c[j];
  H = H - Mat3<S>::identity();
  Vec3<S> nc{-c[0], -c[1], -c[2]};
  return {Rotation<S>(R.R * H), nc};
}

template <class S>
Mat3<S> essential_from_pose(const Rotation<S>& R, const Vec3<S>& c) {
  if (c.is_zero()) throw ZeroCenterError("essential_from_pose: c = 0");
  return cross_matrix(c) * R.R.transposed();
}

// 9x9 with zero diagonal blocks, (1,2)=F12, (1,3)=F13, (2,3)=F23, transposes below.
template <class S>
Mat9<S> mega_matrix(const FundamentalTriple<S>& t) {
  Mat9<S> m;
  m.set_block(0, 1, t.F12);
  m.set_block(0, 2, t.F13);
  m.set_block(1, 2, t.F23);
  m.set_block(1, 0, t.F12.transposed());
  m.set_block(2, 0, t.F13.transposed());
  m.set_block(2, 1, t.F23.transposed());
  return m;
}

// Same block pattern built from u_ij [c_j - c_i]x; symmetric with skew blocks.
template <class S>
Mat9<S> mega_center_form(const Vec3<S>& c1, const Vec3<S>& c2, const Vec3<S>& c3, const S& u12,
                         const S& u13, const S& u23) {
  FundamentalTriple<S> t;
  t.F12 = u12 * cross_matrix(c2 - c1);
  t.F13 = u13 * cross_matrix(c3 - c1);
  t.F23 = u23 * cross_matrix(c3 - c2);
  return mega_matrix(t);
}

// The three kernel vectors of the center form (noncollinear centers), stacked 9-vectors.
template <class S>
std::array<std::array<S, 9>, 3> center_form_kernel(const Vec3<S>& c1, const Vec3<S>& c2,
                                                   const Vec3<S>& c3, const S& u12, const S& u13,
                                                   const S& u23) {
  auto pack = [](const Vec3<S>& a, const Vec3<S>& b, const Vec3<S>& c) {
    return std::array<S, 9>{a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]};
  };
  Vec3<S> zero;
  return {pack(u23 * (c2 - c1), u13 * (c1 - c2), zero),
          pack(u23 * (c3 - c1), zero, u12 * (c1 - c3)),
          pack(zero, u13 * (c3 - c2), u12 * (c2 - c3))};
}

// ---- deterministic sampling ---------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // inclusive bounds, unbiased via rejection
  long next_int(long lo, long hi) {
    std::uint64_t range = std::uint64_t(hi - lo) + 1;
    std::uint64_t limit = (~std::uint64_t(0) / range) * range;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return lo + long(x % range);
  }

  double next_unit() { return double(eng_() >> 11) * 0x1p-53; }
  double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }
  Rational next_rational(long den, long lo, long hi) { return rat(next_int(lo, hi), den); }

 private:
  std::mt19937_64 eng_;
};

struct SampleOptions {
  bool collinear_centers = false;
  int max_retries = 100;
};

namespace detail {

template <class S>
Vec3<S> random_center(Rng& rng) {
  if constexpr (is_exact_field<S>) {
    return {S(rng.next_rational(8, -8, 8)), S(rng.next_rational(8, -8, 8)),
            S(rng.next_rational(8, -8, 8))};
  } else {
    return {S(rng.next_real(-1, 1)), S(rng.next_real(-1, 1)), S(rng.next_real(-1, 1))};
  }
}

template <class S>
Rotation<S> random_rotation(Rng& rng) {
  if constexpr (is_exact_field<S>) {
    // Cayley transform of a rational skew matrix: exact element of SO(3).
    Vec3<S> s{S(rng.next_rational(4, -4, 4)), S(rng.next_rational(4, -4, 4)),
              S(rng.next_rational(4, -4, 4))};
    Mat3<S> Sk = cross_matrix(s);
    Mat3<S> I = Mat3<S>::identity();
    return Rotation<S>((I - Sk) * inverse3(I + Sk));
  } else {
    double q[4], n = 0;
    do {
      n = 0;
      for (double& x : q) {
        x = rng.next_real(-1, 1);
        n += x * x;
      }
    } while (n < 1e-6);
    n = std::sqrt(n);
    double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    Mat3<S> R;
    R(0, 0) = S(1 - 2 * (y * y + z * z));
    R(0, 1) = S(2 * (x * y - w * z));
    R(0, 2) = S(2 * (x * z + w * y));
    R(1, 0) = S(2 * (x * y + w * z));
    R(1, 1) = S(1 - 2 * (x * x + z * z));
    R(1, 2) = S(2 * (y * z - w * x));
    R(2, 0) = S(2 * (x * z - w * y));
    R(2, 1) = S(2 * (y * z + w * x));
    R(2, 2) = S(1 - 2 * (x * x + y * y));
    return Rotation<S>(R);
  }
}

template <class S>
Intrinsics<S> random_intrinsics(Rng& rng) {
  Mat3<S> K;
  if constexpr (is_exact_field<S>) {
    K(0, 0) = S(rng.next_rational(8, 4, 16));
    K(1, 1) = S(rng.next_rational(8, 4, 16));
    K(2, 2) = S(rng.next_rational(8, 4, 16));
    K(0, 1) = S(rng.next_rational(8, -8, 8));
    K(0, 2) = S(rng.next_rational(8, -8, 8));
    K(1, 2) = S(rng.next_rational(8, -8, 8));
  } else {
    K(0, 0) = S(rng.next_real(0.5, 2));
    K(1, 1) = S(rng.next_real(0.5, 2));
    K(2, 2) = S(rng.next_real(0.5, 2));
    K(0, 1) = S(rng.next_real(-1, 1));
    K(0, 2) = S(rng.next_real(-1, 1));
    K(1, 2) = S(rng.next_real(-1, 1));
  }
  return Intrinsics<S>(K);
}

template <class S>
bool centers_degenerate(const std::array<Vec3<S>, 3>& c, bool want_collinear) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if ((c[i] - c[j]).is_zero()) return true;
  if (want_collinear) return false;  // exact collinearity arranged by construction
  Vec3<S> u = c[1] - c[0], v = c[2] - c[0];
  MatX<S> m(2, 3);
  for (int k = 0; k < 3; ++k) {
    m(0, k) = u[k];
    m(1, k) = v[k];
  }
  return smallalg::numeric_rank(m) < 2;
}

}  // namespace detail

template <class S>
std::pair<CameraTriple<S>, FundamentalTriple<S>> sample_triple(Prior prior, std::uint64_t seed,
                                                               SampleOptions opt = {}) {
  Rng rng(seed);
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    std::array<Vec3<S>, 3> cs{detail::random_center<S>(rng), detail::random_center<S>(rng),
                              detail::random_center<S>(rng)};
    if (opt.collinear_centers) {
      S t;
      if constexpr (is_exact_field<S>)
        t = S(rng.next_rational(8, -16, 16));
      else
        t = S(rng.next_real(-2, 2));
      cs[2] = cs[0] + t * (cs[1] - cs[0]);
    }
    if (detail::centers_degenerate(cs, opt.collinear_centers)) continue;

    std::array<std::optional<Intrinsics<S>>, 3> Ks;
    if (prior == Prior::E) {
      for (auto& K : Ks) K = Intrinsics<S>::identity();
    } else if (prior == Prior::Delta) {
      auto K = detail::random_intrinsics<S>(rng);
      for (auto& slot : Ks) slot = K;
    } else {
      for (auto& slot : Ks) slot = detail::random_intrinsics<S>(rng);
    }
    std::array<Camera<S>, 3> cams{
        Camera<S>{*Ks[0], detail::random_rotation<S>(rng), cs[0]},
        Camera<S>{*Ks[1], detail::random_rotation<S>(rng), cs[1]},
        Camera<S>{*Ks[2], detail::random_rotation<S>(rng), cs[2]}};
    CameraTriple<S> ct(cams, prior);
    return {ct, triple_from_cameras(ct)};
  }
  throw SamplerDegenerateError("sample_triple: too many degenerate draws");
}

// ---- dimension of Y_K by Jacobian rank ----------------------------------------

// Columns of d(Psi-hat) at a float sample, plus the three per-factor scale
// directions; the projective dimension is rank of the combined matrix minus 3.
inline Eigen::MatrixXd psi_hat_jacobian(Prior prior, Rng& rng,
                                        Eigen::MatrixXd* scale_dirs = nullptr) {
  using M = Eigen::Matrix3d;
  std::array<M, 3> K, R;
  std::array<Eigen::Vector3d, 3> c;
  for (int i = 0; i < 3; ++i) {
    auto Ki = detail::random_intrinsics<Complex>(rng).K;
    auto Ri = detail::random_rotation<Complex>(rng).R;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        K[i](a, b) = Ki(a, b).real();
        R[i](a, b) = Ri(a, b).real();
      }
    for (int a = 0; a < 3; ++a) c[i](a) = rng.next_real(-1, 1);
  }
  if (prior == Prior::E)
    for (auto& Ki : K) Ki = M::Identity();
  if (prior == Prior::Delta) K[1] = K[2] = K[0];

  auto crossm = [](const Eigen::Vector3d& v) {
    M r;
    r << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
    return r;
  };
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  std::array<M, 3> A, Kinv;
  for (int i = 0; i < 3; ++i) {
    Kinv[i] = K[i].inverse();
    A[i] = Kinv[i].transpose() * R[i];
  }
  std::array<M, 3> F;
  for (int p = 0; p < 3; ++p) {
    auto [i, j] = pairs[p];
    F[p] = A[i] * crossm(c[j] - c[i]) * R[j].transpose() * Kinv[j];
  }

  std::vector<Eigen::VectorXd> cols;
  auto push = [&](int p, const M& dF) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(27);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) v(9 * p + 3 * a + b) = dF(a, b);
    return v;
  };
  auto add_param = [&](auto&& per_pair) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(27);
    for (int p = 0; p < 3; ++p) v += push(p, per_pair(p));
    cols.push_back(v);
  };

  // centers
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m) {
      Eigen::Vector3d e = Eigen::Vector3d::Zero();
      e(m) = 1;
      add_param([&](int p) -> M {
        auto [i, j] = pairs[p];
        double s = (j == k ? 1.0 : 0.0) - (i == k ? 1.0 : 0.0);
        if (s == 0) return M::Zero();
        return A[i] * crossm(s * e) * R[j].transpose() * Kinv[j];
      });
    }
  // rotations, tangent R_k exp(t [w]x)
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m) {
      Eigen::Vector3d w = Eigen::Vector3d::Zero();
      w(m) = 1;
      add_param([&](int p) -> M {
        auto [i, j] = pairs[p];
        M d = M::Zero();
        M Mij = crossm(c[j] - c[i]);
        if (i == k) d += Kinv[i].transpose() * R[i] * crossm(w) * Mij * R[j].transpose() * Kinv[j];
        if (j == k) d -= A[i] * Mij * crossm(w) * R[j].transpose() * Kinv[j];
        return d;
      });
    }
  // intrinsics (upper-triangular basis); prior E has none, Delta shares one K
  const std::array<std::pair<int, int>, 6> tri{{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
  auto k_column = [&](int k, const M& E) {
    add_param([&](int p) -> M {
      auto [i, j] = pairs[p];
      M d = M::Zero();
      if (i == k) d -= Kinv[i].transpose() * E.transpose() * F[p];
      if (j == k) d -= F[p] * E * Kinv[j];
      return d;
    });
  };
  if (prior == Prior::F) {
    for (int k = 0; k < 3; ++k)
      for (auto [a, b] : tri) {
        M E = M::Zero();
        E(a, b) = 1;
        k_column(k, E);
      }
  } else if (prior == Prior::Delta) {
    for (auto [a, b] : tri) {
      M E = M::Zero();
      E(a, b) = 1;
      // shared K: sum of the three per-camera columns
      add_param([&](int p) -> M {
        auto [i, j] = pairs[p];
        return -(Kinv[i].transpose() * E.transpose() * F[p]) - F[p] * E * Kinv[j];
      });
    }
  }

  Eigen::MatrixXd J(27, int(cols.size()));
  for (size_t q = 0; q < cols.size(); ++q) J.col(int(q)) = cols[q];
  if (scale_dirs) {
    *scale_dirs = Eigen::MatrixXd::Zero(27, 3);
    for (int p = 0; p < 3; ++p)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) (*scale_dirs)(9 * p + 3 * a + b, p) = F[p](a, b);
  }
  return J;
}

inline int dimension_estimate(Prior prior, int trials, std::uint64_t seed = 1729,
                              double tol = 1e-8) {
  if (trials < 1) throw std::invalid_argument("dimension_estimate: trials >= 1");
  Rng rng(seed);
  int best = 0;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd S;
    Eigen::MatrixXd J = psi_hat_jacobian(prior, rng, &S);
    Eigen::MatrixXd JS(27, J.cols() + 3);
    JS << J, S;
    auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(JS).singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * sv(0)) ++r;
    best = std::max(best, r - 3);
  }
  return best;
}

}  // namespace threeview::camera
