#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "threeview/camera.hpp"
#include "threeview/poly.hpp"

namespace threeview::constraints {

using camera::FundamentalTriple;
using smallalg::adjugate;
using smallalg::det3;

enum class Family {
  DetCubics,
  Quartics,
  Quintics,
  Septics,
  Demazure,
  MartyushevCubic,
  NecF2,
  NecF3,
  NecF4,
  MartyushevSextic,
  M6
};

inline int family_count(Family f) {
  switch (f) {
    case Family::DetCubics: return 3;
    case Family::Quartics: return 9;
    case Family::Quintics: return 27;
    case Family::Septics: return 108;
    case Family::Demazure: return 27;
    case Family::MartyushevCubic: return 1;
    case Family::NecF2: return 27;
    case Family::NecF3: return 27;
    default: return 1;
  }
}

inline const char* family_name(Family f) {
  switch (f) {
    case Family::DetCubics: return "det_cubics";
    case Family::Quartics: return "quartics";
    case Family::Quintics: return "quintics";
    case Family::Septics: return "septics";
    case Family::Demazure: return "demazure";
    case Family::MartyushevCubic: return "martyushev_cubic";
    case Family::NecF2: return "nec_f2";
    case Family::NecF3: return "nec_f3";
    case Family::NecF4: return "nec_f4";
    case Family::MartyushevSextic: return "martyushev_sextic";
    default: return "m6";
  }
}

// F_ji is always F_ij^T (exact for canonical affine representatives).
template <class S>
struct IndexedTriple {
  const FundamentalTriple<S>& t;
  Mat3<S> operator()(int i, int j) const {
    if (i < j) {
      if (i == 1 && j == 2) return t.F12;
      if (i == 1 && j == 3) return t.F13;
      return t.F23;
    }
    if (j == 1 && i == 2) return t.F12.transposed();
    if (j == 1 && i == 3) return t.F13.transposed();
    return t.F23.transposed();
  }
};

// ---- generator families --------------------------------------------------------

template <class S>
std::vector<S> eval_det_cubics(const FundamentalTriple<S>& t) {
  return {det3(t.F12), det3(t.F13), det3(t.F23)};
}

template <class S>
Mat3<S> quartic_difference(const FundamentalTriple<S>& t, int line) {
  IndexedTriple<S> f{t};
  auto sw = [&](int i, int j, int k) { return f(i, j) * adjugate(f(k, j)) * f(k, i); };
  switch (line) {
    case 0: return sw(1, 2, 3) - sw(1, 3, 2);
    case 1: return sw(3, 1, 2) - sw(3, 2, 1);
    default: return sw(2, 1, 3) - sw(2, 3, 1);
  }
}

// Independent entries (1,2),(1,3),(2,3) of the three antisymmetric differences.
template <class S>
std::vector<S> eval_quartics(const FundamentalTriple<S>& t) {
  std::vector<S> out;
  out.reserve(9);
  for (int line = 0; line < 3; ++line) {
    Mat3<S> d = quartic_difference(t, line);
    out.push_back(d(0, 1));
    out.push_back(d(0, 2));
    out.push_back(d(1, 2));
  }
  return out;
}

// Count of nonzero entries across the three full difference matrices (each
// independent violation appears as a +/- pair).
template <class S>
int quartic_entry_violations(const FundamentalTriple<S>& t, double tol = 0.0) {
  int n = 0;
  for (int line = 0; line < 3; ++line) {
    Mat3<S> d = quartic_difference(t, line);
    for (auto& x : d.m) {
      if constexpr (is_exact_field<S>) {
        if (!scalar_traits<S>::is_zero(x)) ++n;
      } else {
        if (scalar_traits<S>::abs_approx(x) > tol) ++n;
      }
    }
  }
  return n;
}

template <class S>
std::vector<S> eval_quintics(const FundamentalTriple<S>& t) {
  IndexedTriple<S> f{t};
  std::vector<S> out;
  out.reserve(27);
  const std::array<std::array<std::pair<int, int>, 3>, 3> groups{{
      {{{1, 3}, {1, 2}, {3, 2}}},
      {{{1, 2}, {1, 3}, {2, 3}}},
      {{{2, 1}, {2, 3}, {1, 3}}},
  }};
  for (auto& g : groups) {
    Mat3<S> p = adjugate(f(g[0].first, g[0].second)) * f(g[1].first, g[1].second) *
                adjugate(f(g[2].first, g[2].second));
    for (auto& x : p.m) out.push_back(x);
  }
  return out;
}

struct SepticIndexPair {
  int k1, k2, i1, j1, i2, j2;  // 1-based block and inner indices
  std::array<int, 2> deleted_rows() const { return {3 * (k1 - 1) + i1, 3 * (k2 - 1) + i2}; }
  std::array<int, 2> deleted_cols() const { return {3 * (k1 - 1) + j1, 3 * (k2 - 1) + j2}; }
};

inline const std::vector<SepticIndexPair>& enumerate_septic_indices() {
  static const std::vector<SepticIndexPair> all = [] {
    std::vector<SepticIndexPair> v;
    for (auto [k1, k2] : {std::pair{1, 2}, {1, 3}, {2, 3}})
      for (int i1 = 1; i1 <= 3; ++i1)
        for (int j1 = i1; j1 <= 3; ++j1)
          for (int i2 = 1; i2 <= 3; ++i2)
            for (int j2 = i2; j2 <= 3; ++j2) v.push_back({k1, k2, i1, j1, i2, j2});
    return v;
  }();
  return all;
}

template <class S>
S minor7(const Mat9<S>& m, const SepticIndexPair& p) {
  auto dr = p.deleted_rows(), dc = p.deleted_cols();
  MatX<S> sub(7, 7);
  int ri = 0;
  for (int r = 1; r <= 9; ++r) {
    if (r == dr[0] || r == dr[1]) continue;
    int ci = 0;
    for (int c = 1; c <= 9; ++c) {
      if (c == dc[0] || c == dc[1]) continue;
      sub(ri, ci++) = m(r - 1, c - 1);
    }
    ++ri;
  }
  if constexpr (is_exact_field<S>) {
    return smallalg::det_exact(sub);
  } else {
    Eigen::MatrixXcd e = smallalg::to_eigen(sub);
    return S(Eigen::PartialPivLU<Eigen::MatrixXcd>(e).determinant());
  }
}

template <class S>
std::vector<S> eval_septics(const FundamentalTriple<S>& t) {
  Mat9<S> m = camera::mega_matrix(t);
  const auto& idx = enumerate_septic_indices();
  std::vector<S> out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = minor7(m, idx[i]);
  return out;
}

// 2 M M^T M - trace(M M^T) M; vanishes exactly on essential matrices.
template <class S>
Mat3<S> eval_demazure(const Mat3<S>& m) {
  Mat3<S> g = m * m.transposed();
  return scalar_traits<S>::from_int(2) * (g * m) - g.trace() * m;
}

template <class S>
Mat3<S> diamond(const Mat3<S>& a, const Mat3<S>& b) {
  return adjugate(a - b) - adjugate(a) - adjugate(b);
}

template <class S>
struct MartyushevResult {
  S cubic;                     // trace(F12 F23 F31)
  std::vector<S> nec_f2;       // 27: cyclic (1,2,3),(2,3,1),(3,1,2)
  std::vector<S> nec_f3;      // 27
  S nec_f4;
  S sextic;                    // tr^3(F^2) - 12 tr(F^2) tr(F^4) + 32 tr(F^6)
};

template <class S>
MartyushevResult<S> eval_martyushev(const FundamentalTriple<S>& t) {
  IndexedTriple<S> f{t};
  MartyushevResult<S> r;
  r.cubic = (f(1, 2) * f(2, 3) * f(3, 1)).trace();
  const S half = scalar_traits<S>::one() / scalar_traits<S>::from_int(2);
  for (auto [i, j, k] : {std::array{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}) {
    Mat3<S> fij = f(i, j), fjk = f(j, k), fki = f(k, i);
    Mat3<S> g = fij.transposed() * fij;
    Mat3<S> e2 = g * fjk - (half * g.trace()) * fjk + adjugate(fij) * fki.transposed();
    Mat3<S> e3 = fjk.transposed() * adjugate(fij) + adjugate(fjk) * fij.transposed() +
                 diamond(fij * fjk, fki.transposed());
    for (auto& x : e2.m) r.nec_f2.push_back(x);
    for (auto& x : e3.m) r.nec_f3.push_back(x);
  }
  Mat9<S> F = camera::mega_matrix(t);
  Mat9<S> F2 = F * F;
  Mat9<S> F3 = F2 * F;
  S t2 = F2.trace();
  S t4 = scalar_traits<S>::zero(), t6 = scalar_traits<S>::zero();
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      t4 += F2(i, j) * F2(j, i);
      t6 += F3(i, j) * F3(j, i);
    }
  S q = scalar_traits<S>::zero();
  for (const Mat3<S>* m : {&t.F12, &t.F13, &t.F23}) {
    S s = (m->transposed() * (*m)).trace();
    q += s * s;
  }
  r.nec_f4 = t2 * t2 - scalar_traits<S>::from_int(16) * t4 + scalar_traits<S>::from_int(24) * q;
  r.sextic = t2 * t2 * t2 - scalar_traits<S>::from_int(12) * t2 * t4 +
             scalar_traits<S>::from_int(32) * t6;
  return r;
}

// ---- the multihomogeneous sextic M6 --------------------------------------------

namespace detail {

struct Walk {
  std::vector<int> verts;          // v0..vk = v0
  std::array<int, 3> edge_degree;  // traversals per block {12, 13, 23}
};

inline int edge_block(int a, int b) {
  int lo = std::min(a, b), hi = std::max(a, b);
  if (lo == 0) return hi == 1 ? 0 : 1;
  return 2;
}

inline const std::vector<Walk>& closed_walks(int length) {
  static const std::array<std::vector<Walk>, 7> cache = [] {
    std::array<std::vector<Walk>, 7> c;
    for (int len : {2, 4, 6}) {
      std::vector<int> v;
      std::function<void()> rec = [&]() {
        if (int(v.size()) == len) {
          if (v.back() != v.front()) {
            Walk w;
            w.verts = v;
            w.verts.push_back(v.front());
            w.edge_degree = {0, 0, 0};
            for (int s = 0; s < len; ++s) w.edge_degree[edge_block(w.verts[s], w.verts[s + 1])]++;
            c[len].push_back(std::move(w));
          }
          return;
        }
        for (int nxt = 0; nxt < 3; ++nxt) {
          if (nxt == v.back()) continue;
          v.push_back(nxt);
          rec();
          v.pop_back();
        }
      };
      for (int start = 0; start < 3; ++start) {
        v = {start};
        rec();
      }
    }
    return c;
  }();
  return cache[length];
}

template <class S>
Mat3<S> block_of(const FundamentalTriple<S>& t, int a, int b) {
  int blk = edge_block(a, b);
  const Mat3<S>& F = blk == 0 ? t.F12 : (blk == 1 ? t.F13 : t.F23);
  return a < b ? F : F.transposed();
}

// multidegree-graded trace of F^len for the mega matrix, as a coefficient map
template <class S>
std::map<std::array<int, 3>, S> graded_trace(const FundamentalTriple<S>& t, int length) {
  std::map<std::array<int, 3>, S> out;
  for (const Walk& w : closed_walks(length)) {
    Mat3<S> p = block_of(t, w.verts[0], w.verts[1]);
    for (size_t s = 1; s + 1 < w.verts.size(); ++s) p = p * block_of(t, w.verts[s], w.verts[s + 1]);
    auto it = out.find(w.edge_degree);
    if (it == out.end())
      out.emplace(w.edge_degree, p.trace());
    else
      it->second += p.trace();
  }
  return out;
}

}  // namespace detail

// Multidegree-(2,2,2) part of tr^3(F^2) - 12 tr(F^2) tr(F^4) + 32 tr(F^6),
// extracted exactly by grading the closed-walk decomposition of the traces.
template <class S>
S eval_M6(const FundamentalTriple<S>& t) {
  auto T2 = detail::graded_trace(t, 2);
  auto T4 = detail::graded_trace(t, 4);
  auto T6 = detail::graded_trace(t, 6);
  auto get = [](auto& m, std::array<int, 3> k) {
    auto it = m.find(k);
    return it == m.end() ? scalar_traits<S>::zero() : it->second;
  };
  S a = get(T2, {2, 0, 0}), b = get(T2, {0, 2, 0}), c = get(T2, {0, 0, 2});
  S m6 = scalar_traits<S>::from_int(6) * a * b * c;
  m6 -= scalar_traits<S>::from_int(12) *
        (a * get(T4, {0, 2, 2}) + b * get(T4, {2, 0, 2}) + c * get(T4, {2, 2, 0}));
  m6 += scalar_traits<S>::from_int(32) * get(T6, {2, 2, 2});
  return m6;
}

// ---- symbolic expansions (oracle route, used by tests and the Jacobian) ---------

namespace sym {

using syminterp::PolyQ;
using syminterp::sym_det;
using syminterp::sym_matrix;

inline Mat3<PolyQ> fmat(int i, int j) {
  if (i < j) return sym_matrix<GaussianRational>(i == 1 ? (j == 2 ? 0 : 1) : 2, false);
  return sym_matrix<GaussianRational>(j == 1 ? (i == 2 ? 0 : 1) : 2, true);
}

inline Mat3<PolyQ> sym_adj(const Mat3<PolyQ>& a) { return adjugate(a); }

inline std::vector<PolyQ> sym_det_cubics() {
  std::vector<PolyQ> out;
  for (int b = 0; b < 3; ++b)
    out.push_back(sym_det(to_matx(sym_matrix<GaussianRational>(b))));
  return out;
}

inline std::vector<PolyQ> sym_quartics() {
  std::vector<PolyQ> out;
  auto sw = [&](int i, int j, int k) { return fmat(i, j) * sym_adj(fmat(k, j)) * fmat(k, i); };
  for (auto [i, j, k] : {std::array{1, 2, 3}, {3, 1, 2}, {2, 1, 3}}) {
    Mat3<PolyQ> d = sw(i, j, k) - sw(i, k, j);
    out.push_back(d(0, 1));
    out.push_back(d(0, 2));
    out.push_back(d(1, 2));
  }
  return out;
}

inline std::vector<PolyQ> sym_quintics() {
  std::vector<PolyQ> out;
  const std::array<std::array<std::pair<int, int>, 3>, 3> groups{{
      {{{1, 3}, {1, 2}, {3, 2}}},
      {{{1, 2}, {1, 3}, {2, 3}}},
      {{{2, 1}, {2, 3}, {1, 3}}},
  }};
  for (auto& g : groups) {
    Mat3<PolyQ> p =
        sym_adj(fmat(g[0].first, g[0].second)) * fmat(g[1].first, g[1].second) *
        sym_adj(fmat(g[2].first, g[2].second));
    for (auto& x : p.m) out.push_back(x);
  }
  return out;
}

inline Mat9<PolyQ> sym_mega() {
  camera::FundamentalTriple<PolyQ> t;
  t.F12 = sym_matrix<GaussianRational>(0);
  t.F13 = sym_matrix<GaussianRational>(1);
  t.F23 = sym_matrix<GaussianRational>(2);
  return camera::mega_matrix(t);
}

inline std::vector<PolyQ> sym_septics() {
  Mat9<PolyQ> m = sym_mega();
  std::vector<PolyQ> out;
  for (const auto& p : enumerate_septic_indices()) {
    auto dr = p.deleted_rows(), dc = p.deleted_cols();
    MatX<PolyQ> sub(7, 7);
    int ri = 0;
    for (int r = 1; r <= 9; ++r) {
      if (r == dr[0] || r == dr[1]) continue;
      int ci = 0;
      for (int c = 1; c <= 9; ++c) {
        if (c == dc[0] || c == dc[1]) continue;
        sub(ri, ci++) = m(r - 1, c - 1);
      }
      ++ri;
    }
    out.push_back(sym_det(sub));
  }
  return out;
}

inline std::vector<PolyQ> sym_demazure() {
  std::vector<PolyQ> out;
  for (int b = 0; b < 3; ++b) {
    Mat3<PolyQ> m = sym_matrix<GaussianRational>(b);
    Mat3<PolyQ> d = eval_demazure(m);
    for (auto& x : d.m) out.push_back(x);
  }
  return out;
}

inline PolyQ sym_sextic21() {
  Mat9<PolyQ> F = sym_mega();
  Mat9<PolyQ> F2 = F * F;
  Mat9<PolyQ> F3 = F2 * F;
  PolyQ t2 = F2.trace();
  PolyQ t4, t6;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      t4 += F2(i, j) * F2(j, i);
      t6 += F3(i, j) * F3(j, i);
    }
  GaussianRational c12{Rational(12)}, c32{Rational(32)};
  return t2 * t2 * t2 - c12 * (t2 * t4) + c32 * t6;
}

inline PolyQ sym_M6() { return sym_sextic21().multidegree_part({2, 2, 2}); }

}  // namespace sym

// ---- classifiers ----------------------------------------------------------------

enum class FVerdict { Member, NonMember };
enum class EVerdict { LocallyConsistent, Inconsistent };

template <class S>
struct FamilyResult {
  std::vector<S> residuals;

  int nonzero(double tol = 0.0) const {
    int n = 0;
    for (auto& r : residuals) {
      if constexpr (is_exact_field<S>) {
        if (!scalar_traits<S>::is_zero(r)) ++n;
      } else {
        if (scalar_traits<S>::abs_approx(r) > tol) ++n;
      }
    }
    return n;
  }
  double max_abs() const {
    double m = 0;
    for (auto& r : residuals) m = std::max(m, scalar_traits<S>::abs_approx(r));
    return m;
  }
};

template <class S>
struct ConstraintReport {
  std::map<Family, FamilyResult<S>> families;
  std::array<double, 3> factor_norms{1, 1, 1};
  double tol = 0.0;

  bool family_ok(Family f) const { return families.at(f).nonzero(tol) == 0; }
  int nonzero(Family f) const { return families.at(f).nonzero(tol); }
  double max_abs(Family f) const { return families.at(f).max_abs(); }
};

inline constexpr double kClassifyTol = 1e-8;

template <class S>
FundamentalTriple<S> normalized_for_classification(const FundamentalTriple<S>& t,
                                                   std::array<double, 3>* norms) {
  if constexpr (is_exact_field<S>) {
    if (norms) *norms = {1, 1, 1};
    return t;
  } else {
    FundamentalTriple<S> r = t;
    for (int k = 0; k < 3; ++k) {
      double n = r.factor(k).frobenius();
      if (norms) (*norms)[k] = n;
      if (n > 0) r.factor(k) = S(1.0 / n) * r.factor(k);
    }
    return r;
  }
}

template <class S>
std::pair<FVerdict, ConstraintReport<S>> classify_F(const FundamentalTriple<S>& t,
                                                    double tol = kClassifyTol) {
  ConstraintReport<S> rep;
  rep.tol = is_exact_field<S> ? 0.0 : tol;
  FundamentalTriple<S> n = normalized_for_classification(t, &rep.factor_norms);
  rep.families[Family::DetCubics] = {eval_det_cubics(n)};
  rep.families[Family::Quartics] = {eval_quartics(n)};
  rep.families[Family::Quintics] = {eval_quintics(n)};
  rep.families[Family::Septics] = {eval_septics(n)};
  bool ok = rep.family_ok(Family::DetCubics) && rep.family_ok(Family::Quartics) &&
            rep.family_ok(Family::Quintics) && rep.family_ok(Family::Septics);
  return {ok ? FVerdict::Member : FVerdict::NonMember, std::move(rep)};
}

// Local consistency with Y_E only: these equations cut out Y_E near generic
// points but may admit excess zero loci, so a positive verdict is not Member.
template <class S>
std::pair<EVerdict, ConstraintReport<S>> classify_E_local(const FundamentalTriple<S>& t,
                                                          double tol = kClassifyTol) {
  ConstraintReport<S> rep;
  rep.tol = is_exact_field<S> ? 0.0 : tol;
  FundamentalTriple<S> n = normalized_for_classification(t, &rep.factor_norms);
  FamilyResult<S> dem;
  for (const Mat3<S>* m : {&n.F12, &n.F13, &n.F23}) {
    Mat3<S> d = eval_demazure(*m);
    for (auto& x : d.m) dem.residuals.push_back(x);
  }
  rep.families[Family::Demazure] = std::move(dem);
  rep.families[Family::Quartics] = {eval_quartics(n)};
  rep.families[Family::M6] = {{eval_M6(n)}};
  bool ok = rep.family_ok(Family::Demazure) && rep.family_ok(Family::Quartics) &&
            rep.family_ok(Family::M6);
  return {ok ? EVerdict::LocallyConsistent : EVerdict::Inconsistent, std::move(rep)};
}

// ---- Jacobian of the local Y_E system -------------------------------------------

namespace detail {

inline const std::vector<std::array<syminterp::PolyQ, 27>>& local_system_gradients() {
  static const std::vector<std::array<syminterp::PolyQ, 27>> grads = [] {
    std::vector<syminterp::PolyQ> eqs = sym::sym_demazure();
    for (auto& q : sym::sym_quartics()) eqs.push_back(q);
    eqs.push_back(sym::sym_M6());
    std::vector<std::array<syminterp::PolyQ, 27>> g(eqs.size());
    for (size_t e = 0; e < eqs.size(); ++e)
      for (int v = 0; v < 27; ++v) g[e][v] = eqs[e].derivative(v);
    return g;
  }();
  return grads;
}

}  // namespace detail

// Numeric rank of the Jacobian of the 37 local equations (27 Demazure,
// 9 quartics, M6) at a float triple.
inline int jacobian_rank_E(const FundamentalTriple<Complex>& t, double tol = 1e-8) {
  const auto& grads = detail::local_system_gradients();
  auto vals = syminterp::flatten_triple(t.F12, t.F13, t.F23);
  MatX<Complex> J(int(grads.size()), 27);
  for (size_t e = 0; e < grads.size(); ++e)
    for (int v = 0; v < 27; ++v) J(int(e), v) = grads[e][v].template evaluate<Complex>(vals);
  return smallalg::rank_float(J, tol);
}

}  // namespace threeview::constraints
