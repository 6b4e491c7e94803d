#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "threeview/mat.hpp"

namespace threeview::syminterp {

// Monomial in the 27 entries of (F12, F13, F23): variable id = 9*block + 3*row + col.
// Sorted ids biased by +1 are packed 5 bits each (total degree <= 12).
using Monomial = std::uint64_t;

inline Monomial mono_one() { return 0; }

inline Monomial mono_from_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  Monomial m = 0;
  for (size_t i = 0; i < ids.size(); ++i) m |= Monomial(ids[i] + 1) << (5 * i);
  return m;
}

inline std::vector<int> mono_ids(Monomial m) {
  std::vector<int> ids;
  while (m) {
    ids.push_back(int(m & 31) - 1);
    m >>= 5;
  }
  return ids;
}

inline int mono_degree(Monomial m) {
  int d = 0;
  while (m) {
    ++d;
    m >>= 5;
  }
  return d;
}

inline Monomial mono_mul(Monomial a, Monomial b) {
  auto ia = mono_ids(a), ib = mono_ids(b);
  ia.insert(ia.end(), ib.begin(), ib.end());
  return mono_from_ids(std::move(ia));
}

inline std::array<int, 3> mono_multidegree(Monomial m) {
  std::array<int, 3> d{0, 0, 0};
  for (int id : mono_ids(m)) d[id / 9]++;
  return d;
}

template <class C>
class SparsePoly {
 public:
  std::unordered_map<Monomial, C> terms;

  SparsePoly() = default;
  static SparsePoly variable(int id) {
    SparsePoly p;
    p.terms[mono_from_ids({id})] = scalar_traits<C>::one();
    return p;
  }
  static SparsePoly constant(C c) {
    SparsePoly p;
    if (!scalar_traits<C>::is_zero(c)) p.terms[mono_one()] = std::move(c);
    return p;
  }

  bool is_zero() const { return terms.empty(); }
  int total_degree() const {
    int d = 0;
    for (auto& [m, c] : terms) d = std::max(d, mono_degree(m));
    return d;
  }

  SparsePoly& add_term(Monomial m, const C& c) {
    auto it = terms.find(m);
    if (it == terms.end()) {
      if (!scalar_traits<C>::is_zero(c)) terms.emplace(m, c);
    } else {
      it->second += c;
      if (scalar_traits<C>::is_zero(it->second)) terms.erase(it);
    }
    return *this;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) {
    for (auto& [m, c] : b.terms) a.add_term(m, c);
    return a;
  }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) {
    for (auto& [m, c] : b.terms) a.add_term(m, -c);
    return a;
  }
  friend SparsePoly operator-(const SparsePoly& a) {
    SparsePoly r;
    for (auto& [m, c] : a.terms) r.terms.emplace(m, -c);
    return r;
  }
  friend SparsePoly operator*(const C& s, const SparsePoly& a) {
    SparsePoly r;
    if (scalar_traits<C>::is_zero(s)) return r;
    for (auto& [m, c] : a.terms) r.terms.emplace(m, s * c);
    return r;
  }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly r;
    for (auto& [ma, ca] : a.terms)
      for (auto& [mb, cb] : b.terms) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
  }
  SparsePoly& operator+=(const SparsePoly& b) { return *this = *this + b; }
  SparsePoly& operator-=(const SparsePoly& b) { return *this = *this - b; }

  SparsePoly derivative(int var) const {
    SparsePoly r;
    for (auto& [m, c] : terms) {
      auto ids = mono_ids(m);
      int mult = int(std::count(ids.begin(), ids.end(), var));
      if (!mult) continue;
      auto rest = ids;
      rest.erase(std::find(rest.begin(), rest.end(), var));
      r.add_term(mono_from_ids(rest), scalar_traits<C>::from_int(mult) * c);
    }
    return r;
  }

  // values: 27 scalars, possibly in a different field than the coefficients
  template <class V>
  V evaluate(const std::array<V, 27>& values) const {
    V acc = scalar_traits<V>::zero();
    for (auto& [m, c] : terms) {
      V t = V(to_complex(c));
      for (int id : mono_ids(m)) t *= values[id];
      acc += t;
    }
    return acc;
  }
  // exact evaluation when coefficient and value fields agree
  C evaluate_exact(const std::array<C, 27>& values) const {
    C acc = scalar_traits<C>::zero();
    for (auto& [m, c] : terms) {
      C t = c;
      for (int id : mono_ids(m)) t *= values[id];
      acc += t;
    }
    return acc;
  }

  SparsePoly multidegree_part(std::array<int, 3> d) const {
    SparsePoly r;
    for (auto& [m, c] : terms)
      if (mono_multidegree(m) == d) r.terms.emplace(m, c);
    return r;
  }

  double max_abs_coeff() const {
    double a = 0;
    for (auto& [m, c] : terms) a = std::max(a, scalar_traits<C>::abs_approx(c));
    return a;
  }
  SparsePoly pruned(double eps) const {
    SparsePoly r;
    for (auto& [m, c] : terms)
      if (scalar_traits<C>::abs_approx(c) > eps) r.terms.emplace(m, c);
    return r;
  }
};

using PolyC = SparsePoly<Complex>;
using PolyQ = SparsePoly<GaussianRational>;

template <class S>
std::array<S, 27> flatten_triple(const Mat3<S>& F12, const Mat3<S>& F13, const Mat3<S>& F23) {
  std::array<S, 27> v;
  for (int b = 0; b < 3; ++b) {
    const Mat3<S>& F = b == 0 ? F12 : (b == 1 ? F13 : F23);
    for (int i = 0; i < 9; ++i) v[9 * b + i] = F.m[i];
  }
  return v;
}

}  // namespace threeview::syminterp

namespace threeview {

// Ring-only traits so Mat3/Mat9/MatX work over symbolic entries.
template <class C>
struct scalar_traits<syminterp::SparsePoly<C>> {
  using P = syminterp::SparsePoly<C>;
  static constexpr bool exact = true;
  static P zero() { return P(); }
  static P one() { return P::constant(scalar_traits<C>::one()); }
  static P from_int(long v) { return P::constant(scalar_traits<C>::from_int(v)); }
  static bool is_zero(const P& p) { return p.is_zero(); }
  static P conj(const P& p) {
    P r;
    for (auto& [m, c] : p.terms) r.terms.emplace(m, scalar_traits<C>::conj(c));
    return r;
  }
  static double abs_approx(const P& p) { return p.max_abs_coeff(); }
};

}  // namespace threeview

namespace threeview::syminterp {

// Symbolic matrices of the triple's entries.
template <class C>
Mat3<SparsePoly<C>> sym_matrix(int block, bool transposed = false) {
  Mat3<SparsePoly<C>> F;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      int rr = transposed ? c : r, cc = transposed ? r : c;
      F(r, c) = SparsePoly<C>::variable(9 * block + 3 * rr + cc);
    }
  return F;
}

// determinant of a small symbolic matrix by cofactor expansion with zero pruning
template <class C>
SparsePoly<C> sym_det(const MatX<SparsePoly<C>>& a) {
  const int n = a.rows;
  if (n == 1) return a(0, 0);
  SparsePoly<C> acc;
  for (int j = 0; j < n; ++j) {
    if (a(0, j).is_zero()) continue;
    MatX<SparsePoly<C>> minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    SparsePoly<C> t = a(0, j) * sym_det(minor);
    if (j % 2)
      acc -= t;
    else
      acc += t;
  }
  return acc;
}

}  // namespace threeview::syminterp
