#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "tdlc/linear/poly.hpp"

namespace tdlc::linear {

/// B with B^{-1} g B = diag(eigenvalues); valuations[i] = v_p(eigenvalues[i]).
struct Eigenbasis {
  QMatrix basis;
  std::vector<Rational> eigenvalues;
  std::vector<std::int64_t> valuations;
};

/// Diagonal g keeps the standard basis. Otherwise g needs n distinct rational eigenvalues;
/// eigenvectors are scaled to primitive integer vectors and ordered by decreasing valuation.
inline Eigenbasis eigenbasis(const QMatrix& g, int p) {
  const int n = g.n();
  Eigenbasis out;
  if (g.is_diagonal()) {
    out.basis = QMatrix::identity(n);
    for (int i = 0; i < n; ++i) {
      out.eigenvalues.push_back(g(i, i));
      out.valuations.push_back(vp(g(i, i), p).value());
    }
    return out;
  }
  auto roots = rational_roots(characteristic_polynomial(g));
  if (static_cast<int>(roots.size()) != n) throw UnsupportedElement("eigenbasis: eigenvalues are not all rational");
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (roots[i] == roots[i - 1]) throw UnsupportedElement("eigenbasis: repeated eigenvalue " + roots[i].get_str());
  std::vector<std::pair<std::int64_t, Rational>> order;
  for (const auto& r : roots) order.emplace_back(vp(r, p).value(), r);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  out.basis = QMatrix(n);
  for (int j = 0; j < n; ++j) {
    const auto& lambda = order[j].second;
    auto ker = (g - QMatrix::identity(n).scaled(lambda)).kernel();
    if (ker.size() != 1) throw UnsupportedElement("eigenbasis: unexpected eigenspace dimension");
    auto v = ker.front();
    Integer l = 1, gcd = 0;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (auto& x : v) {
      x *= l;
      mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), x.get_num_mpz_t());
    }
    for (int i = 0; i < n; ++i) out.basis(i, j) = v[i] / gcd;
    out.eigenvalues.push_back(lambda);
    out.valuations.push_back(order[j].first);
  }
  return out;
}

}  // namespace tdlc::linear
