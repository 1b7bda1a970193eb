#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "tdlc/linear/matrix.hpp"

namespace tdlc::linear {

/// Coefficients c_0..c_n of det(xI - A), c_i multiplying x^i (Faddeev–LeVerrier).
inline std::vector<Rational> characteristic_polynomial(const QMatrix& a) {
  const int n = a.n();
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
  c[n] = 1;
  QMatrix m(n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + QMatrix::identity(n).scaled(c[n - k + 1]);
    c[n - k] = -(a * m).trace() / k;
  }
  return c;
}

/// Valuations of the roots of a polynomial, read off the lower convex hull of
/// the points (i, v_p(c_i)); sorted in decreasing order.
inline std::vector<Rational> newton_root_valuations(const std::vector<Rational>& c, int p) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) pts.emplace_back(static_cast<std::int64_t>(i), vp(c[i], p).value());
  std::vector<std::pair<std::int64_t, std::int64_t>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // drop b if it lies on or above segment a -> pt
      const __int128 lhs = static_cast<__int128>(b.second - a.second) * (pt.first - a.first);
      const __int128 rhs = static_cast<__int128>(pt.second - a.second) * (b.first - a.first);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  std::vector<Rational> out;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto len = hull[i + 1].first - hull[i].first;
    Rational slope(Integer(hull[i + 1].second - hull[i].second), Integer(len));
    slope.canonicalize();
    for (std::int64_t k = 0; k < len; ++k) out.push_back(-slope);
  }
  std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) { return a > b; });
  return out;
}

/// Eigenvalue valuations of g with multiplicity, decreasing.
inline std::vector<Rational> newton_valuations(const QMatrix& g, int p) {
  return newton_root_valuations(characteristic_polynomial(g), p);
}

/// p^{Σ_{i,j} max(0, v_i - v_j)} over the eigenvalue valuations v.
inline Integer scale_formula(const QMatrix& g, int p) {
  const auto v = newton_valuations(g, p);
  Rational e = 0;
  for (const auto& a : v)
    for (const auto& b : v)
      if (a > b) e += a - b;
  if (e.get_den() != 1) throw Error("scale_formula: non-integral exponent " + e.get_str());
  return ipow(p, e.get_num().get_si());
}

namespace detail {

// Prime factorization by trial division; throws when a large cofactor remains unproven.
inline std::map<Integer, int> factor(Integer z) {
  std::map<Integer, int> out;
  z = abs(z);
  const unsigned long limit = 1000000;
  for (unsigned long d = 2; d <= limit && z > 1; ++d) {
    if (Integer(d) * d > z) break;
    while (mpz_divisible_ui_p(z.get_mpz_t(), d)) {
      out[Integer(d)]++;
      z /= d;
    }
  }
  if (z > 1) {
    if (z > Integer(limit) * limit) throw UnsupportedElement("characteristic polynomial coefficients too large to factor");
    out[z]++;
  }
  return out;
}

inline std::vector<Integer> divisors(const Integer& z) {
  std::vector<Integer> out{1};
  for (const auto& [q, e] : factor(z)) {
    const auto base = out.size();
    Integer pw = 1;
    for (int k = 1; k <= e; ++k) {
      pw *= q;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pw);
    }
  }
  return out;
}

inline Rational evaluate(const std::vector<Rational>& c, const Rational& x) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Divides by (x - r), assuming r is a root.
inline std::vector<Rational> deflate(const std::vector<Rational>& c, const Rational& r) {
  const std::size_t n = c.size() - 1;
  std::vector<Rational> q(n, Rational(0));
  Rational carry = 0;
  for (std::size_t i = n; i-- > 0;) {
    carry = c[i + 1] + carry * r;
    q[i] = carry;
  }
  return q;
}

}  // namespace detail

/// Rational roots with multiplicity (rational root theorem).
inline std::vector<Rational> rational_roots(std::vector<Rational> c) {
  std::vector<Rational> roots;
  while (c.size() > 1 && c[0] == 0) {
    roots.push_back(0);
    c.erase(c.begin());
  }
  if (c.size() <= 1) return roots;
  Integer l = 1;
  for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> a;
  for (const auto& x : c) a.push_back(Integer(x * l));
  std::vector<Rational> candidates;
  for (const auto& u : detail::divisors(a.front()))
    for (const auto& w : detail::divisors(a.back())) {
      Rational q(u, w);
      q.canonicalize();
      candidates.push_back(q);
      candidates.push_back(-q);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& r : candidates) {
    while (c.size() > 1 && detail::evaluate(c, r) == 0) {
      roots.push_back(r);
      c = detail::deflate(c, r);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace tdlc::linear
