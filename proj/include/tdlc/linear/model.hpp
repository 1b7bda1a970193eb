#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/kernel/matrix_window.hpp"
#include "tdlc/level.hpp"
#include "tdlc/linear/eigen.hpp"
#include "tdlc/linear/shape.hpp"
#include "tdlc/model_types.hpp"

namespace tdlc::linear {

/// GL_n(Q_p) on exact rational matrices, with filtration B_k = I + p^k M_n(Z_p)
/// (B_0 = GL_n(Z_p), the reference compact open subgroup).
class LinearModel {
 public:
  using Element = QMatrix;
  using CompactOpen = ShapeSubgroup;
  using Closed = ShapeSubgroup;
  using Window = kernel::MatrixWindow;

  LinearModel(int p = 2, int n = 2) : p_(p), n_(n) {
    if (p < 2 || !mpz_probab_prime_p(Integer(p).get_mpz_t(), 25)) throw Error("LinearModel: p must be prime");
    if (n < 1) throw Error("LinearModel: n must be positive");
  }

  int p() const { return p_; }
  int n() const { return n_; }
  static std::string name() { return "linear"; }

  // ---- group law ----
  Element identity() const { return QMatrix::identity(n_); }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const { return a.inverse(); }
  Element pow(const Element& a, std::int64_t k) const { return a.power(k); }
  Element conj(const Element& g, const Element& x) const { return g * x * g.inverse(); }

  std::string format(const Element& x) const { return format_matrix(x); }
  Element parse(std::string_view s) const {
    auto m = parse_matrix(s);
    if (m.n() != n_) throw ParseError("matrix size does not match n", 0);
    return m;
  }
  std::string format(const CompactOpen& u) const { return u.to_string(); }
  /// "<shape>" or "<shape>|<basis matrix>".
  CompactOpen parse_compact_open(std::string_view s) const {
    const auto bar = s.find('|');
    auto shape = parse_shape(s.substr(0, bar));
    if (shape.n() != n_) throw ParseError("shape size does not match n", 0);
    if (!shape.is_multiplicative()) throw ParseError("shape violates the triangle inequality", 0);
    if (bar == std::string_view::npos) return CompactOpen(p_, shape);
    return CompactOpen(p_, parse(s.substr(bar + 1)), shape);
  }

  // ---- filtration and windows ----
  Level proximity(const Element& x) const {
    if (!in_reference(x)) return Level::outside();
    ExtInt k = ExtInt::pos_inf();
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s) k = linear::min(k, vp(x(r, s) - (r == s ? 1 : 0), p_));
    if (k.is_pos_inf()) return Level::infinity();
    return Level::at(k.value());
  }

  Window window(int level) const { return Window(p_, n_, level); }

  bool in_reference(const Element& x) const {
    for (const auto& e : x.entries())
      if (!is_p_integral(e, p_)) return false;
    return vp(x.determinant(), p_) == ExtInt(0);
  }

  kernel::Code project(const Element& x, int level) const {
    if (!in_reference(x)) throw NotIntegral("project: " + format(x) + " is not in GL_n(Z_p)");
    const Window w = window(level);
    kernel::MatrixWindow::Residues r;
    for (const auto& e : x.entries()) r.push_back(residue(e, p_, w.modulus()));
    return w.encode(r);
  }

  CompactOpen reference() const { return filtration(0); }
  CompactOpen filtration(int k) const { return CompactOpen(p_, ValShape::constant(n_, k)); }
  /// Standard Iwahori subgroup: GL_n(Z_p) with entries above the diagonal in pZ_p.
  CompactOpen iwahori() const {
    ValShape m(n_, ExtInt(0));
    for (int r = 0; r < n_; ++r)
      for (int s = r + 1; s < n_; ++s) m(r, s) = 1;
    return CompactOpen(p_, m);
  }

  // ---- compact open (and closed) shape subgroups ----
  bool contains(const CompactOpen& u, const Element& x) const { return u.contains(x); }
  bool within_reference(const CompactOpen& u) const { return u.inside_reference(); }
  kernel::SubgroupImage image(const CompactOpen& u, int level, std::uint64_t cap = kernel::kDefaultCap) const {
    return u.image(level, cap);
  }

  /// g U g^{-1}; stays in U's basis when g is monomial there.
  CompactOpen conjugate(const CompactOpen& u, const Element& g) const {
    const QMatrix d = u.basis_inverse() * g * u.basis();
    if (auto mono = u.monomial(d)) {
      const auto& [perm, vals] = *mono;
      return CompactOpen(p_, u.basis(), u.shape().scaled(vals).permuted(perm));
    }
    if (auto al = aligned(u, g); al && !(al->first.basis() == u.basis())) return conjugate(al->first, g);
    return CompactOpen(p_, g * u.basis(), u.shape());
  }

  CompactOpen intersect(const CompactOpen& a, const CompactOpen& b) const {
    auto rb = b.rebased(a.basis());
    if (rb) return CompactOpen(p_, a.basis(), max(a.shape(), rb->shape()));
    auto ra = a.rebased(b.basis());
    if (ra) return CompactOpen(p_, b.basis(), max(ra->shape(), b.shape()));
    throw UnsupportedElement("intersect: shapes in incompatible bases " + a.to_string() + " and " + b.to_string());
  }

  std::optional<Closed> as_closed(const CompactOpen& u) const { return u; }
  Closed closure(const Closed& c) const { return c; }
  bool is_closed(const Closed&) const { return true; }

  /// U rebased to a basis in which g is diagonal, with the eigenvalue valuations.
  std::optional<std::pair<CompactOpen, std::vector<std::int64_t>>> aligned(const CompactOpen& u, const Element& g) const {
    const QMatrix d = u.basis_inverse() * g * u.basis();
    if (d.is_diagonal()) {
      std::vector<std::int64_t> v;
      for (int i = 0; i < n_; ++i) v.push_back(vp(d(i, i), p_).value());
      return std::make_pair(u, v);
    }
    Eigenbasis eb;
    try {
      eb = eigenbasis(g, p_);
    } catch (const UnsupportedElement&) {
      return std::nullopt;
    }
    auto r = u.rebased(eb.basis);
    if (!r) return std::nullopt;
    return std::make_pair(*r, eb.valuations);
  }

  std::optional<SymbolicParts<Closed>> symbolic_parts(const CompactOpen& u, const Element& g) const {
    auto al = aligned(u, g);
    if (!al) return std::nullopt;
    const auto& [v_u, v] = *al;
    const auto& m = v_u.shape();
    auto make = [&](auto rule) {
      ValShape out(n_);
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) out(r, s) = rule(r, s);
      return CompactOpen(p_, v_u.basis(), out);
    };
    const ExtInt inf = ExtInt::pos_inf(), ninf = ExtInt::neg_inf();
    return SymbolicParts<Closed>{
        make([&](int r, int s) { return v[r] <= v[s] ? m(r, s) : inf; }),
        make([&](int r, int s) { return v[r] >= v[s] ? m(r, s) : inf; }),
        make([&](int r, int s) { return v[r] == v[s] ? m(r, s) : inf; }),
        make([&](int r, int s) { return v[r] > v[s] ? ninf : (v[r] == v[s] ? m(r, s) : inf); }),
        make([&](int r, int s) { return v[r] < v[s] ? ninf : (v[r] == v[s] ? m(r, s) : inf); }),
    };
  }

  /// x = w_- w_+ by block UL elimination in g's eigencoordinates (blocks of equal valuation,
  /// ordered by decreasing valuation); w_- is block-unipotent.
  SplitResult<Element> split(const CompactOpen& u, const Element& g, const Element& x) const {
    SplitResult<Element> out;
    if (!u.contains(x)) {
      out.failure = "element " + format(x) + " is not in " + format(u);
      return out;
    }
    auto al = aligned(u, g);
    auto parts = symbolic_parts(u, g);
    if (!al || !parts) {
      out.failure = "no eigenbasis alignment for " + format(u);
      return out;
    }
    const auto& [v_u, v] = *al;
    const auto order = valuation_order(v);
    const QMatrix y = permute(v_u.to_coordinates(x), order);
    const auto blocks = block_ranges(v, order);
    QMatrix l = y;
    for (std::size_t b = blocks.size(); b-- > 0;) {
      const auto [b0, b1] = blocks[b];
      const int w = b1 - b0;
      QMatrix d(w);
      for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) d(i, j) = l(b0 + i, b0 + j);
      const auto dinv = d.try_inverse();
      if (!dinv) {
        out.failure = "singular pivot block at rows " + std::to_string(b0) + ".." + std::to_string(b1 - 1) + " for " + format(x);
        return out;
      }
      for (int i = 0; i < b0; ++i) {
        std::vector<Rational> coef(w, Rational(0));
        for (int j = 0; j < w; ++j)
          for (int k = 0; k < w; ++k) coef[j] += l(i, b0 + k) * (*dinv)(k, j);
        for (int j = 0; j < w; ++j) {
          if (coef[j] == 0) continue;
          for (int c = 0; c < n_; ++c) l(i, c) -= coef[j] * l(b0 + j, c);
        }
      }
    }
    const QMatrix nu = y * l.inverse();
    const QMatrix w_minus = v_u.from_coordinates(unpermute(nu, order));
    const QMatrix w_plus = v_u.from_coordinates(unpermute(l, order));
    if (!parts->minus.contains(w_minus) || !parts->plus.contains(w_plus)) {
      out.failure = "factors of " + format(x) + " leave U_- or U_+";
      return out;
    }
    out.split = Split<Element>{w_minus, w_plus};
    return out;
  }

  /// t = t' v with v the block-diagonal part of t in eigencoordinates (v ∈ U_0) and
  /// t' ∈ con(g^{-1}) ∩ U_+.
  std::pair<Element, Element> contraction_split(const CompactOpen& u, const Element& g, const Element& t) const {
    auto al = aligned(u, g);
    if (!al) throw UnsupportedElement("contraction_split: no eigenbasis alignment");
    const auto& [v_u, v] = *al;
    const QMatrix y = v_u.to_coordinates(t);
    QMatrix d(n_);
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s)
        if (v[r] == v[s]) d(r, s) = y(r, s);
    const QMatrix vpart = v_u.from_coordinates(d);
    return {t * vpart.inverse(), vpart};
  }

  /// Shapes give closed U_{--}; there is never a witness to search for.
  std::optional<BelowWitness<Element>> below_witness(const CompactOpen&, const Element&, int) const {
    return std::nullopt;
  }

  // ---- dynamics oracles ----
  Closed con_set(const Element& g) const {
    return valuation_set(g, [](std::int64_t a, std::int64_t b) {
      return a > b ? ExtInt::neg_inf() : ExtInt::pos_inf();
    });
  }
  Closed par_set(const Element& g) const {
    return valuation_set(g, [](std::int64_t a, std::int64_t b) {
      return a >= b ? ExtInt::neg_inf() : ExtInt::pos_inf();
    });
  }
  /// rbco(g, V_k) for the neighbourhood base V_k = shape constant e + k in g's eigenbasis,
  /// where p^e B^{-1} is integral (V_k = B_k when the eigenbasis lies in GL_n(Z_p)):
  /// the equal-valuation blocks congruent to I mod p^{e+k}.
  Closed rbco_set(const Element& g, int k) const {
    const auto eb = eigenbasis(g, p_);
    const CompactOpen probe(p_, eb.basis, ValShape::constant(n_, 0));
    const std::int64_t e = probe.has_integral_basis() ? 0 : probe.scaled_basis().e;
    ValShape m(n_);
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s)
        m(r, s) = eb.valuations[r] == eb.valuations[s] ? ExtInt(e + k) : ExtInt::pos_inf();
    return Closed(p_, eb.basis, m);
  }
  bool con_oracle(const Element& g, const Element& x) const { return con_set(g).contains(x); }
  bool par_oracle(const Element& g, const Element& x) const { return par_set(g).contains(x); }

  /// In an eigenbasis B of g: shape e + depth + max(0, v_r - v_s), where p^e B^{-1} is
  /// integral, so that the subgroup lies in GL_n(Z_p).
  std::optional<CompactOpen> tidy_subgroup(const Element& g, int depth = 0) const {
    Eigenbasis eb;
    try {
      eb = eigenbasis(g, p_);
    } catch (const UnsupportedElement&) {
      return std::nullopt;
    }
    const CompactOpen probe(p_, eb.basis, ValShape::constant(n_, 0));
    const std::int64_t e = probe.has_integral_basis() ? 0 : probe.scaled_basis().e;
    ValShape m(n_);
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s)
        m(r, s) = ExtInt(e + depth + std::max<std::int64_t>(0, eb.valuations[r] - eb.valuations[s]));
    return CompactOpen(p_, eb.basis, m);
  }

  std::uint64_t scale_formula(const Element& g) const {
    const Integer s = linear::scale_formula(g, p_);
    if (!s.fits_ulong_p()) throw Error("scale_formula: value does not fit 64 bits");
    return s.get_ui();
  }

  // ---- sampling ----
  Element random_in(const CompactOpen& u, std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> coef(-p_ * p_, p_ * p_);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      QMatrix y(n_);
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) {
          const ExtInt e = u.shape()(r, s);
          const Rational delta = r == s ? 1 : 0;
          if (e.is_pos_inf()) {
            y(r, s) = delta;
          } else {
            const std::int64_t ex = e.is_finite() ? e.value() : -2;
            y(r, s) = delta + ppow(p_, ex) * coef(rng);
          }
        }
      const QMatrix x = u.from_coordinates(y);
      if (x.determinant() != 0 && u.contains(x)) return x;
    }
    throw Error("random_in: rejection sampling failed for " + format(u));
  }

  Element random_element(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> coef(-3, 3);
    while (true) {
      QMatrix x(n_);
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s) x(r, s) = coef(rng);
      if (x.determinant() != 0) return x;
    }
  }

  std::vector<Element> con_samples(const Element& g, int count, std::mt19937_64& rng) const {
    const auto eb = eigenbasis(g, p_);
    const QMatrix binv = eb.basis.inverse();
    std::uniform_int_distribution<int> coef(-p_ * p_, p_ * p_), ex(-2, 3);
    std::vector<Element> out;
    for (int c = 0; c < count; ++c) {
      QMatrix y = identity();
      for (int r = 0; r < n_; ++r)
        for (int s = 0; s < n_; ++s)
          if (eb.valuations[r] > eb.valuations[s]) y(r, s) = ppow(p_, ex(rng)) * coef(rng);
      out.push_back(eb.basis * y * binv);
    }
    return out;
  }

 private:
  template <class Rule>
  Closed valuation_set(const Element& g, Rule rule) const {
    const auto eb = eigenbasis(g, p_);
    ValShape m(n_);
    for (int r = 0; r < n_; ++r)
      for (int s = 0; s < n_; ++s) m(r, s) = rule(eb.valuations[r], eb.valuations[s]);
    return Closed(p_, eb.basis, m);
  }

  static std::vector<int> valuation_order(const std::vector<std::int64_t>& v) {
    std::vector<int> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
    return order;
  }

  static std::vector<std::pair<int, int>> block_ranges(const std::vector<std::int64_t>& v, const std::vector<int>& order) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(order.size());
    for (int i = 0; i < n;) {
      int j = i;
      while (j < n && v[order[j]] == v[order[i]]) ++j;
      out.emplace_back(i, j);
      i = j;
    }
    return out;
  }

  static QMatrix permute(const QMatrix& y, const std::vector<int>& order) {
    QMatrix out(y.n());
    for (int i = 0; i < y.n(); ++i)
      for (int j = 0; j < y.n(); ++j) out(i, j) = y(order[i], order[j]);
    return out;
  }
  static QMatrix unpermute(const QMatrix& y, const std::vector<int>& order) {
    QMatrix out(y.n());
    for (int i = 0; i < y.n(); ++i)
      for (int j = 0; j < y.n(); ++j) out(order[i], order[j]) = y(i, j);
    return out;
  }

  int p_;
  int n_;
};

}  // namespace tdlc::linear
