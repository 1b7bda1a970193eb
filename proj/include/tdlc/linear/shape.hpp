#pragma once

#include <optional>
#include <unordered_set>
#include <string>
#include <string_view>
#include <vector>

#include "tdlc/kernel/matrix_window.hpp"
#include "tdlc/kernel/window.hpp"
#include "tdlc/linear/matrix.hpp"

namespace tdlc::linear {

/// n×n matrix M over Z ∪ {±inf}; describes {y : v_p(y_rs - δ_rs) >= M_rs}.
class ValShape {
 public:
  ValShape() = default;
  explicit ValShape(int n, ExtInt fill = 0) : n_(n), m_(static_cast<std::size_t>(n) * n, fill) {}
  ValShape(int n, std::vector<ExtInt> entries) : n_(n), m_(std::move(entries)) {
    if (m_.size() != static_cast<std::size_t>(n) * n) throw Error("ValShape: entry count is not n^2");
  }

  /// Principal congruence shape: I + p^k M_n(Z_p), or GL_n(Z_p) for k = 0.
  static ValShape constant(int n, std::int64_t k) { return ValShape(n, ExtInt(k)); }
  static ValShape trivial(int n) { return ValShape(n, ExtInt::pos_inf()); }

  int n() const { return n_; }
  ExtInt& operator()(int r, int s) { return m_[static_cast<std::size_t>(r) * n_ + s]; }
  ExtInt operator()(int r, int s) const { return m_[static_cast<std::size_t>(r) * n_ + s]; }

  /// Triangle inequality M_rs + M_st >= M_rt (hence closure under multiplication).
  bool is_multiplicative() const {
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s)
        for (int t = 0; t < n_; ++t)
          if ((*this)(r, s) + (*this)(s, t) < (*this)(r, t)) return false;
    return true;
  }
  /// Multiplicative with every diagonal entry >= 0 and no -inf: the unit group is compact open
  /// (when also finite everywhere) or a compact subgroup.
  bool is_compact_type() const {
    if (!is_multiplicative()) return false;
    for (const auto& e : m_)
      if (e.is_neg_inf()) return false;
    for (int r = 0; r < n_; ++r)
      if ((*this)(r, r) < ExtInt(0)) return false;
    return true;
  }
  bool is_finite() const {
    for (const auto& e : m_)
      if (!e.is_finite()) return false;
    return true;
  }
  bool is_constant() const {
    for (const auto& e : m_)
      if (e != m_.front()) return false;
    return true;
  }

  friend ValShape max(const ValShape& a, const ValShape& b) {
    ValShape out = a;
    for (std::size_t i = 0; i < out.m_.size(); ++i) out.m_[i] = linear::max(a.m_[i], b.m_[i]);
    return out;
  }

  /// Shape of D y D^{-1} for D diagonal with entry valuations d.
  ValShape scaled(const std::vector<std::int64_t>& d) const {
    ValShape out = *this;
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s)
        if (r != s) out(r, s) = (*this)(r, s) + ExtInt(d[r] - d[s]);
    return out;
  }

  /// Shape of P y P^{-1} where P e_s = e_{perm[s]}.
  ValShape permuted(const std::vector<int>& perm) const {
    ValShape out(n_);
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s) out(perm[r], perm[s]) = (*this)(r, s);
    return out;
  }

  ValShape clamped_at_zero() const {
    ValShape out = *this;
    for (auto& e : out.m_) e = linear::max(e, ExtInt(0));
    return out;
  }

  bool admits(const QMatrix& y, int p) const {
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s) {
        const Rational d = y(r, s) - (r == s ? 1 : 0);
        if (vp(d, p) < (*this)(r, s)) return false;
      }
    return true;
  }

  friend bool operator==(const ValShape&, const ValShape&) = default;

  std::string to_string() const {
    std::string s;
    for (int r = 0; r < n_; ++r) {
      if (r) s += ';';
      for (int c = 0; c < n_; ++c) {
        if (c) s += ',';
        s += (*this)(r, c).to_string();
      }
    }
    return s;
  }

 private:
  int n_ = 0;
  std::vector<ExtInt> m_;
};

/// Grammar as for matrices, entries integers or "inf" / "-inf".
inline ValShape parse_shape(std::string_view text) {
  std::vector<std::vector<ExtInt>> rows;
  std::size_t i = 0;
  if (text.empty()) throw ParseError("empty shape", 0);
  while (i <= text.size()) {
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos) semi = text.size();
    std::vector<ExtInt> row;
    std::size_t j = i;
    while (j <= semi) {
      auto comma = text.find(',', j);
      if (comma == std::string_view::npos || comma > semi) comma = semi;
      const auto tok = text.substr(j, comma - j);
      if (tok == "inf") {
        row.push_back(ExtInt::pos_inf());
      } else if (tok == "-inf") {
        row.push_back(ExtInt::neg_inf());
      } else {
        const Rational q = parse_rational(tok, j);
        if (q.get_den() != 1) throw ParseError("shape entries must be integers", j);
        row.push_back(ExtInt(q.get_num().get_si()));
      }
      j = comma + 1;
    }
    rows.push_back(std::move(row));
    i = semi + 1;
  }
  const auto n = rows.size();
  std::vector<ExtInt> entries;
  for (const auto& r : rows) {
    if (r.size() != n) throw ParseError("shape must be square", 0);
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return ValShape(static_cast<int>(n), entries);
}

/// B · {units y : y and y^{-1} satisfy the shape} · B^{-1} inside GL_n(Q_p).
class ShapeSubgroup {
 public:
  ShapeSubgroup(int p, QMatrix basis, ValShape shape)
      : p_(p), basis_(std::move(basis)), basis_inv_(basis_.inverse()), shape_(std::move(shape)) {
    if (basis_.n() != shape_.n()) throw Error("ShapeSubgroup: basis and shape sizes differ");
    if (!shape_.is_multiplicative()) throw Error("ShapeSubgroup: shape violates the triangle inequality: " + shape_.to_string());
  }
  ShapeSubgroup(int p, ValShape shape) : ShapeSubgroup(p, QMatrix::identity(shape.n()), std::move(shape)) {}

  int p() const { return p_; }
  int n() const { return shape_.n(); }
  const QMatrix& basis() const { return basis_; }
  const QMatrix& basis_inverse() const { return basis_inv_; }
  const ValShape& shape() const { return shape_; }

  QMatrix to_coordinates(const QMatrix& x) const { return basis_inv_ * x * basis_; }
  QMatrix from_coordinates(const QMatrix& y) const { return basis_ * y * basis_inv_; }

  bool contains(const QMatrix& x) const {
    if (x.n() != n()) return false;
    const QMatrix y = to_coordinates(x);
    if (!shape_.admits(y, p_)) return false;
    const auto yi = y.try_inverse();
    return yi && shape_.admits(*yi, p_);
  }

  /// B ∈ GL_n(Z_p).
  bool has_integral_basis() const {
    for (const auto& e : basis_.entries())
      if (!is_p_integral(e, p_)) return false;
    return vp(basis_.determinant(), p_) == ExtInt(0);
  }

  /// Same subgroup expressed in another basis, when the change of basis keeps it a shape.
  std::optional<ShapeSubgroup> rebased(const QMatrix& new_basis) const {
    const QMatrix t = new_basis.inverse() * basis_;  // U = new_basis (t S t^{-1}) new_basis^{-1}
    if (t.is_identity()) return ShapeSubgroup(p_, new_basis, shape_);
    if (auto mono = monomial(t)) {
      const auto& [perm, vals] = *mono;
      return ShapeSubgroup(p_, new_basis, shape_.scaled(vals).permuted(perm));
    }
    const ShapeSubgroup self_coords(p_, shape_);
    if (self_coords.contains(t)) return ShapeSubgroup(p_, new_basis, shape_);
    if (shape_.is_constant() && shape_(0, 0) >= ExtInt(0) && ShapeSubgroup(p_, ValShape::constant(n(), 0)).contains(t))
      return ShapeSubgroup(p_, new_basis, shape_);
    return std::nullopt;
  }

  /// Contained in GL_n(Z_p), as far as can be certified: exactly when B ∈ GL_n(Z_p);
  /// otherwise every shape entry must be at least the exponent e with p^e B^{-1} integral.
  bool inside_reference() const {
    if (has_integral_basis()) return shape_.clamped_at_zero() == shape_;
    const auto sc = scaled_basis();
    for (int r = 0; r < n(); ++r)
      for (int s = 0; s < n(); ++s)
        if (shape_(r, s) < ExtInt(sc.e)) return false;
    return true;
  }

  /// Image of this ∩ GL_n(Z_p) in GL_n(Z/p^K).
  kernel::SubgroupImage image(int level, std::uint64_t cap = kernel::kDefaultCap) const {
    if (has_integral_basis()) return unimodular_image(level, cap);
    return lattice_image(level, cap);
  }

  kernel::SubgroupImage unimodular_image(int level, std::uint64_t cap) const {
    const kernel::MatrixWindow w(p_, n(), level);
    const ValShape m = shape_.clamped_at_zero();
    const int nn = n() * n();
    std::vector<std::int64_t> step(nn), count(nn), base(nn);
    for (int r = 0; r < n(); ++r)
      for (int s = 0; s < n(); ++s) {
        const int i = r * n() + s;
        const std::int64_t e = m(r, s).is_finite() ? std::min<std::int64_t>(m(r, s).value(), level) : level;
        step[i] = ipow(p_, e).get_si();
        count[i] = w.modulus() / step[i];
        base[i] = w.reduce(r == s ? 1 : 0);
      }
    kernel::MatrixWindow::Residues bres(nn), bires(nn);
    for (int i = 0; i < nn; ++i) {
      bres[i] = residue(basis_.entries()[i], p_, w.modulus());
      bires[i] = residue(basis_inv_.entries()[i], p_, w.modulus());
    }
    const bool plain = basis_.is_identity();
    const kernel::Code bc = w.encode(bres), bic = w.encode(bires);
    std::vector<kernel::Code> out;
    std::vector<std::int64_t> digit(nn, 0);
    kernel::MatrixWindow::Residues y(nn);
    while (true) {
      for (int i = 0; i < nn; ++i) y[i] = w.reduce(base[i] + digit[i] * step[i]);
      if (w.is_invertible(y)) {
        const kernel::Code c = w.encode(y);
        out.push_back(plain ? c : w.mul(w.mul(bc, c), bic));
        if (out.size() > cap) throw ResolutionTooFine(cap);
      }
      int i = nn - 1;
      while (i >= 0 && ++digit[i] == count[i]) digit[i--] = 0;
      if (i < 0) break;
    }
    return kernel::SubgroupImage(w.id(), std::move(out));
  }

  std::string to_string() const {
    if (basis_.is_identity()) return shape_.to_string();
    return shape_.to_string() + "|" + format_matrix(basis_);
  }

  /// (perm, valuations) with t = P·D when t is monomial: D diagonal, P e_s = e_perm[s].
  std::optional<std::pair<std::vector<int>, std::vector<std::int64_t>>> monomial(const QMatrix& t) const {
    std::vector<int> perm(t.n(), -1);
    std::vector<std::int64_t> vals(t.n());
    for (int s = 0; s < t.n(); ++s) {
      for (int r = 0; r < t.n(); ++r) {
        if (t(r, s) == 0) continue;
        if (perm[s] >= 0) return std::nullopt;
        perm[s] = r;
        vals[s] = vp(t(r, s), p_).value();
      }
      if (perm[s] < 0) return std::nullopt;
    }
    return std::make_pair(perm, vals);
  }

  /// B rescaled by a power of p to be integral, with p^e B^{-1} integral.
  struct ScaledBasis {
    QMatrix b;
    QMatrix a;  ///< p^e B^{-1}
    std::int64_t e = 0;
  };
  ScaledBasis scaled_basis() const {
    ExtInt lo = ExtInt::pos_inf();
    for (const auto& x : basis_.entries()) lo = linear::min(lo, vp(x, p_));
    const QMatrix b = basis_.scaled(ppow(p_, -lo.value()));
    const QMatrix bi = b.inverse();
    ExtInt lo_inv = ExtInt::pos_inf();
    for (const auto& x : bi.entries()) lo_inv = linear::min(lo_inv, vp(x, p_));
    const std::int64_t e = std::max<std::int64_t>(0, -lo_inv.value());
    return {b, bi.scaled(ppow(p_, e)), e};
  }

 private:
  /// With y' = p^e y integral: x = B y B^{-1} = p^{-2e} (B y' A). Enumerate y' modulo
  /// p^{K+2e}, keep those with B y' A ≡ 0 mod p^{2e}, and reduce x modulo p^K. Shape
  /// entries below -e are clamped there, since every y here lies in p^{-e} M_n(Z_p).
  kernel::SubgroupImage lattice_image(int level, std::uint64_t cap) const {
    const kernel::MatrixWindow w(p_, n(), level);
    const auto sc = scaled_basis();
    const int nn = n() * n();
    const std::int64_t top = level + 2 * sc.e;
    const std::int64_t big = ipow(p_, top).get_si(), pe2 = ipow(p_, 2 * sc.e).get_si();
    std::vector<std::int64_t> bm(nn), am(nn), step(nn), count(nn), base(nn);
    for (int i = 0; i < nn; ++i) {
      bm[i] = residue(sc.b.entries()[i], p_, big);
      am[i] = residue(sc.a.entries()[i], p_, big);
    }
    for (int r = 0; r < n(); ++r)
      for (int s = 0; s < n(); ++s) {
        const int i = r * n() + s;
        const ExtInt m = shape_(r, s);
        const std::int64_t lo = m.is_finite() ? std::max<std::int64_t>(m.value(), -sc.e) : (m.is_neg_inf() ? -sc.e : top);
        const std::int64_t ex = std::min<std::int64_t>(lo + sc.e, top);
        step[i] = ipow(p_, ex).get_si();
        count[i] = big / step[i];
        base[i] = r == s ? ipow(p_, sc.e).get_si() % big : 0;
      }
    long double total = 1;
    for (int i = 0; i < nn; ++i) total *= static_cast<long double>(count[i]);
    if (total > 256.0L * static_cast<long double>(cap)) throw ResolutionTooFine(cap);
    const auto mulmod = [&](const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
      std::vector<std::int64_t> z(nn, 0);
      for (int r = 0; r < n(); ++r)
        for (int s = 0; s < n(); ++s) {
          __int128 acc = 0;
          for (int t = 0; t < n(); ++t) acc += static_cast<__int128>(x[r * n() + t]) * y[t * n() + s];
          z[r * n() + s] = static_cast<std::int64_t>(acc % big);
        }
      return z;
    };
    std::unordered_set<kernel::Code> seen;
    std::vector<std::int64_t> digit(nn, 0), y(nn);
    kernel::MatrixWindow::Residues x(nn);
    while (true) {
      for (int i = 0; i < nn; ++i) y[i] = (base[i] + digit[i] * step[i]) % big;
      const auto z = mulmod(mulmod(bm, y), am);
      bool integral = true;
      for (int i = 0; i < nn && integral; ++i) integral = z[i] % pe2 == 0;
      if (integral) {
        for (int i = 0; i < nn; ++i) x[i] = w.reduce(z[i] / pe2);
        if (w.is_invertible(x)) {
          seen.insert(w.encode(x));
          if (seen.size() > cap) throw ResolutionTooFine(cap);
        }
      }
      int i = nn - 1;
      while (i >= 0 && ++digit[i] == count[i]) digit[i--] = 0;
      if (i < 0) break;
    }
    std::vector<kernel::Code> out(seen.begin(), seen.end());
    return kernel::SubgroupImage(w.id(), std::move(out));
  }

  int p_;
  QMatrix basis_;
  QMatrix basis_inv_;
  ValShape shape_;
};

}  // namespace tdlc::linear
