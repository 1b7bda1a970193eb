#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdlc/linear/rational.hpp"

namespace tdlc::linear {

/// Square matrix with exact rational entries, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Rational(0)) {}
  QMatrix(int n, std::vector<Rational> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(n) * n) throw Error("QMatrix: entry count is not n^2");
  }

  static QMatrix identity(int n) {
    QMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static QMatrix diagonal(const std::vector<Rational>& d) {
    QMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m(i, i) = d[i];
    return m;
  }
  /// I + c E_{rs}
  static QMatrix elementary(int n, int r, int s, const Rational& c) {
    QMatrix m = identity(n);
    m(r, s) += c;
    return m;
  }

  int n() const { return n_; }
  Rational& operator()(int r, int s) { return a_[static_cast<std::size_t>(r) * n_ + s]; }
  const Rational& operator()(int r, int s) const { return a_[static_cast<std::size_t>(r) * n_ + s]; }
  const std::vector<Rational>& entries() const { return a_; }

  friend QMatrix operator*(const QMatrix& x, const QMatrix& y) {
    if (x.n_ != y.n_) throw Error("QMatrix: size mismatch");
    QMatrix out(x.n_);
    for (int r = 0; r < x.n_; ++r)
      for (int k = 0; k < x.n_; ++k) {
        if (x(r, k) == 0) continue;
        for (int s = 0; s < x.n_; ++s) out(r, s) += x(r, k) * y(k, s);
      }
    return out;
  }
  friend QMatrix operator+(const QMatrix& x, const QMatrix& y) {
    QMatrix out = x;
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += y.a_[i];
    return out;
  }
  friend QMatrix operator-(const QMatrix& x, const QMatrix& y) {
    QMatrix out = x;
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= y.a_[i];
    return out;
  }
  QMatrix scaled(const Rational& c) const {
    QMatrix out = *this;
    for (auto& e : out.a_) e *= c;
    return out;
  }
  friend bool operator==(const QMatrix&, const QMatrix&) = default;

  bool is_identity() const { return *this == identity(n_); }
  bool is_diagonal() const {
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s)
        if (r != s && (*this)(r, s) != 0) return false;
    return true;
  }

  Rational trace() const {
    Rational t = 0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  Rational determinant() const {
    QMatrix m = *this;
    Rational det = 1;
    for (int c = 0; c < n_; ++c) {
      int piv = -1;
      for (int r = c; r < n_; ++r)
        if (m(r, c) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      if (piv != c) {
        m.swap_rows(piv, c);
        det = -det;
      }
      det *= m(c, c);
      for (int r = c + 1; r < n_; ++r) {
        if (m(r, c) == 0) continue;
        const Rational f = m(r, c) / m(c, c);
        for (int s = c; s < n_; ++s) m(r, s) -= f * m(c, s);
      }
    }
    return det;
  }

  /// Exact inverse; nullopt when singular.
  std::optional<QMatrix> try_inverse() const {
    QMatrix m = *this, inv = identity(n_);
    for (int c = 0; c < n_; ++c) {
      int piv = -1;
      for (int r = c; r < n_; ++r)
        if (m(r, c) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return std::nullopt;
      m.swap_rows(piv, c);
      inv.swap_rows(piv, c);
      const Rational d = m(c, c);
      for (int s = 0; s < n_; ++s) {
        m(c, s) /= d;
        inv(c, s) /= d;
      }
      for (int r = 0; r < n_; ++r) {
        if (r == c || m(r, c) == 0) continue;
        const Rational f = m(r, c);
        for (int s = 0; s < n_; ++s) {
          m(r, s) -= f * m(c, s);
          inv(r, s) -= f * inv(c, s);
        }
      }
    }
    return inv;
  }

  QMatrix inverse() const {
    auto inv = try_inverse();
    if (!inv) throw Error("QMatrix::inverse: singular matrix");
    return *inv;
  }

  QMatrix power(std::int64_t k) const {
    QMatrix base = k >= 0 ? *this : inverse();
    auto e = static_cast<std::uint64_t>(k >= 0 ? k : -k);
    QMatrix acc = identity(n_);
    while (e) {
      if (e & 1u) acc = acc * base;
      base = base * base;
      e >>= 1u;
    }
    return acc;
  }

  /// Basis of {v : M v = 0}, as column vectors.
  std::vector<std::vector<Rational>> kernel() const {
    QMatrix m = *this;
    std::vector<int> pivot_col;
    int row = 0;
    for (int c = 0; c < n_ && row < n_; ++c) {
      int piv = -1;
      for (int r = row; r < n_; ++r)
        if (m(r, c) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      m.swap_rows(piv, row);
      const Rational d = m(row, c);
      for (int s = 0; s < n_; ++s) m(row, s) /= d;
      for (int r = 0; r < n_; ++r) {
        if (r == row || m(r, c) == 0) continue;
        const Rational f = m(r, c);
        for (int s = 0; s < n_; ++s) m(r, s) -= f * m(row, s);
      }
      pivot_col.push_back(c);
      ++row;
    }
    std::vector<std::vector<Rational>> out;
    for (int free = 0; free < n_; ++free) {
      if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
      std::vector<Rational> v(n_, Rational(0));
      v[free] = 1;
      for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m(static_cast<int>(i), free);
      out.push_back(v);
    }
    return out;
  }

 private:
  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int s = 0; s < n_; ++s) std::swap((*this)(a, s), (*this)(b, s));
  }

  int n_ = 0;
  std::vector<Rational> a_;
};

/// Row-major grammar: entries separated by ',', rows by ';', entries "a" or "a/b".
inline QMatrix parse_matrix(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::size_t i = 0;
  if (text.empty()) throw ParseError("empty matrix", 0);
  while (i <= text.size()) {
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos) semi = text.size();
    std::vector<Rational> row;
    std::size_t j = i;
    while (j <= semi) {
      auto comma = text.find(',', j);
      if (comma == std::string_view::npos || comma > semi) comma = semi;
      row.push_back(parse_rational(text.substr(j, comma - j), j));
      j = comma + 1;
    }
    rows.push_back(std::move(row));
    i = semi + 1;
  }
  const auto n = rows.size();
  std::vector<Rational> entries;
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw ParseError("matrix must be square", 0);
    entries.insert(entries.end(), rows[r].begin(), rows[r].end());
  }
  QMatrix m(static_cast<int>(n), entries);
  if (m.determinant() == 0) throw ParseError("matrix is singular", 0);
  return m;
}

inline std::string format_matrix(const QMatrix& m) {
  std::string s;
  for (int r = 0; r < m.n(); ++r) {
    if (r) s += ';';
    for (int c = 0; c < m.n(); ++c) {
      if (c) s += ',';
      s += format_rational(m(r, c));
    }
  }
  return s;
}

}  // namespace tdlc::linear
