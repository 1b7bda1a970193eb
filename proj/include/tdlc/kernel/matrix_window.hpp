#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/kernel/window.hpp"

namespace tdlc::kernel {

/// GL_n(Z/p^K), the quotient of GL_n(Z_p) by its level-K principal congruence subgroup.
///
/// Codes are row-major base-p^K digit strings, most significant entry first, so code
/// order is lexicographic order of the entry list.
class MatrixWindow {
 public:
  using Residues = std::vector<std::int64_t>;

  MatrixWindow(int p, int n, int level) : p_(p), n_(n), level_(level) {
    if (p < 2 || n < 1 || level < 0) throw Error("MatrixWindow: bad parameters");
    modulus_ = 1;
    for (int i = 0; i < level; ++i) modulus_ *= p;
    long double space = 1;
    for (int i = 0; i < n * n; ++i) space *= static_cast<long double>(modulus_);
    if (space > 1.8e19L) throw Error("MatrixWindow: code space exceeds 64 bits");
  }

  WindowId id() const { return {"gl", p_, n_, level_}; }
  int p() const { return p_; }
  int n() const { return n_; }
  int level() const { return level_; }
  std::int64_t modulus() const { return modulus_; }

  std::uint64_t order() const {
    if (level_ == 0) return 1;
    // |GL_n(Z/p^K)| = p^{(K-1)n^2} |GL_n(F_p)|
    unsigned __int128 o = 1;
    for (int i = 0; i < (level_ - 1) * n_ * n_; ++i) o *= p_;
    std::uint64_t pn = 1;
    for (int i = 0; i < n_; ++i) pn *= p_;
    std::uint64_t pi = 1;
    for (int i = 0; i < n_; ++i) {
      o *= (pn - pi);
      pi *= p_;
    }
    return static_cast<std::uint64_t>(o);
  }

  Code identity() const {
    Residues m(n_ * n_, 0);
    for (int i = 0; i < n_; ++i) m[i * n_ + i] = 1 % modulus_;
    return encode(m);
  }

  Residues decode(Code c) const {
    Residues m(n_ * n_);
    for (int i = n_ * n_ - 1; i >= 0; --i) {
      m[i] = static_cast<std::int64_t>(c % static_cast<Code>(modulus_));
      c /= static_cast<Code>(modulus_);
    }
    return m;
  }

  Code encode(const Residues& m) const {
    Code c = 0;
    for (int i = 0; i < n_ * n_; ++i) c = c * static_cast<Code>(modulus_) + static_cast<Code>(reduce(m[i]));
    return c;
  }

  std::int64_t reduce(std::int64_t v) const { return ((v % modulus_) + modulus_) % modulus_; }

  Code mul(Code a, Code b) const {
    const auto x = decode(a);
    const auto y = decode(b);
    Residues z(n_ * n_, 0);
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s) {
        __int128 acc = 0;
        for (int t = 0; t < n_; ++t) acc += static_cast<__int128>(x[r * n_ + t]) * y[t * n_ + s];
        z[r * n_ + s] = static_cast<std::int64_t>(acc % modulus_);
      }
    return encode(z);
  }

  bool is_unit(std::int64_t v) const { return level_ == 0 || reduce(v) % p_ != 0; }

  /// Inverse of a unit residue modulo p^K.
  std::int64_t unit_inverse(std::int64_t v) const {
    std::int64_t a = reduce(v), m = modulus_, x0 = 1, x1 = 0;
    std::int64_t b = m;
    while (b != 0) {
      const std::int64_t q = a / b;
      std::int64_t t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    if (a != 1 && modulus_ != 1) throw Error("MatrixWindow: non-unit inverse");
    return reduce(x0);
  }

  bool is_invertible(const Residues& m) const { return level_ == 0 || determinant(m) % p_ != 0; }

  std::int64_t determinant(const Residues& m) const {
    // Fraction-free elimination is overkill at n <= 3; expand along the first row recursively.
    return det_rec(m, n_);
  }

  Code inv(Code a) const {
    if (level_ == 0) return 0;
    auto m = decode(a);
    Residues e(n_ * n_, 0);
    for (int i = 0; i < n_; ++i) e[i * n_ + i] = 1;
    for (int col = 0; col < n_; ++col) {
      int piv = -1;
      for (int r = col; r < n_; ++r)
        if (is_unit(m[r * n_ + col])) {
          piv = r;
          break;
        }
      if (piv < 0) throw Error("MatrixWindow: singular element");
      if (piv != col)
        for (int s = 0; s < n_; ++s) {
          std::swap(m[piv * n_ + s], m[col * n_ + s]);
          std::swap(e[piv * n_ + s], e[col * n_ + s]);
        }
      const std::int64_t iv = unit_inverse(m[col * n_ + col]);
      for (int s = 0; s < n_; ++s) {
        m[col * n_ + s] = mulmod(m[col * n_ + s], iv);
        e[col * n_ + s] = mulmod(e[col * n_ + s], iv);
      }
      for (int r = 0; r < n_; ++r) {
        if (r == col || m[r * n_ + col] == 0) continue;
        const std::int64_t f = m[r * n_ + col];
        for (int s = 0; s < n_; ++s) {
          m[r * n_ + s] = reduce(m[r * n_ + s] - mulmod(f, m[col * n_ + s]));
          e[r * n_ + s] = reduce(e[r * n_ + s] - mulmod(f, e[col * n_ + s]));
        }
      }
    }
    return encode(e);
  }

  Code project_to(Code c, const MatrixWindow& coarse) const {
    if (coarse.p_ != p_ || coarse.n_ != n_ || coarse.level_ > level_)
      throw WindowMismatch("MatrixWindow: not a coarser window");
    auto m = decode(c);
    for (auto& v : m) v = coarse.reduce(v);
    return coarse.encode(m);
  }

  std::string format(Code c) const {
    const auto m = decode(c);
    std::string s;
    for (int r = 0; r < n_; ++r) {
      if (r) s += ';';
      for (int t = 0; t < n_; ++t) {
        if (t) s += ',';
        s += std::to_string(m[r * n_ + t]);
      }
    }
    return s;
  }

  /// Every invertible residue matrix, ascending by code.
  std::vector<Code> all_elements(std::uint64_t cap = kDefaultCap) const {
    if (order() > cap) throw ResolutionTooFine(cap);
    std::vector<Code> out;
    Code space = 1;
    for (int i = 0; i < n_ * n_; ++i) space *= static_cast<Code>(modulus_);
    for (Code c = 0; c < space; ++c)
      if (is_invertible(decode(c))) out.push_back(c);
    return out;
  }

 private:
  std::int64_t mulmod(std::int64_t a, std::int64_t b) const {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % modulus_);
  }

  std::int64_t det_rec(const Residues& m, int k) const {
    if (k == 1) return reduce(m[0]);
    std::int64_t acc = 0;
    for (int c = 0; c < k; ++c) {
      Residues minor;
      minor.reserve((k - 1) * (k - 1));
      for (int r = 1; r < k; ++r)
        for (int s = 0; s < k; ++s)
          if (s != c) minor.push_back(m[r * k + s]);
      const std::int64_t term = mulmod(m[c], det_rec(minor, k - 1));
      acc = reduce(c % 2 == 0 ? acc + term : acc - term);
    }
    return acc;
  }

  int p_;
  int n_;
  int level_;
  std::int64_t modulus_;
};

}  // namespace tdlc::kernel
