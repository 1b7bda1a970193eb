#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/kernel/lamp_window.hpp"
#include "tdlc/level.hpp"
#include "tdlc/model_types.hpp"
#include "tdlc/shift/element.hpp"
#include "tdlc/shift/grammar.hpp"
#include "tdlc/shift/lamp_set.hpp"
#include "tdlc/shift/lamp_subspace.hpp"

namespace tdlc::shift {

/// The lamplighter-type group F_p^Z ⋊ Z with filtration B_k = W(k) and reference
/// compact open subgroup the full lamp group L.
class ShiftModel {
 public:
  using Element = ShiftElement;
  using CompactOpen = LampSubspace;
  using Closed = LampSet;
  using Window = kernel::LampWindow;

  explicit ShiftModel(int p = 2) : p_(p) { EPSeq::zero(p); }

  int p() const { return p_; }
  static std::string name() { return "shift"; }

  // ---- group law ----
  Element identity() const { return Element::identity(p_); }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const { return inverse(a); }
  Element pow(const Element& a, std::int64_t k) const { return power(a, k); }
  /// g x g^{-1}
  Element conj(const Element& g, const Element& x) const { return shift::conjugate(g, x); }

  std::string format(const Element& x) const { return format_element(x); }
  Element parse(std::string_view s) const { return parse_element(s, p_); }
  std::string format(const CompactOpen& u) const { return u.to_string(); }
  CompactOpen parse_compact_open(std::string_view s) const { return parse_lamp_subspace(s, p_); }
  std::string format(const Closed& c) const { return c.to_string(); }

  // ---- filtration and windows ----
  Level proximity(const Element& x) const {
    if (x.shift != 0) return Level::outside();
    const auto r = x.lamp.nearest_support();
    if (!r) return Level::infinity();
    if (*r == 0) return Level::outside();
    return Level::at(*r - 1);
  }

  Window window(int level) const { return Window(p_, level); }
  bool in_reference(const Element& x) const { return x.shift == 0; }

  kernel::Code project(const Element& x, int level) const {
    if (x.shift != 0) throw ContainmentError("project: element has a nonzero shift component");
    std::vector<int> digits;
    for (Pos i = -level; i <= level; ++i) digits.push_back(x.lamp.at(i));
    return window(level).encode(digits);
  }

  CompactOpen reference() const { return CompactOpen::full(p_); }
  CompactOpen filtration(int k) const { return CompactOpen::W(p_, k); }

  // ---- compact open subgroups ----
  bool contains(const CompactOpen& u, const Element& x) const { return u.contains(x); }
  /// Every lamp subgroup lies in L.
  bool within_reference(const CompactOpen&) const { return true; }
  kernel::SubgroupImage image(const CompactOpen& u, int level, std::uint64_t cap = kernel::kDefaultCap) const {
    return u.image(level, cap);
  }
  /// g U g^{-1}
  CompactOpen conjugate(const CompactOpen& u, const Element& g) const { return u.shifted(g.shift); }
  CompactOpen intersect(const CompactOpen& a, const CompactOpen& b) const { return a.intersect(b); }
  std::optional<Closed> as_closed(const CompactOpen& u) const { return u.as_lamp_set(); }

  // ---- closed (or tagged non-closed) lamp sets ----
  bool contains(const Closed& c, const Element& x) const { return c.contains(x); }
  /// Window image of the closure.
  kernel::SubgroupImage image(const Closed& c, int level, std::uint64_t cap = kernel::kDefaultCap) const {
    return c.image(level, cap);
  }
  Closed conjugate(const Closed& c, const Element& g) const { return c.shifted(g.shift); }
  Closed intersect(const Closed& a, const Closed& b) const { return a.intersect(b); }
  Closed closure(const Closed& c) const { return c.closure(); }
  bool is_closed(const Closed& c) const { return c.is_closed(); }

  /// U_+, U_-, U_0, U_{--}, U_{++} when U is an interval subgroup whose translates
  /// under g overlap or touch; nullopt otherwise.
  std::optional<SymbolicParts<Closed>> symbolic_parts(const CompactOpen& u, const Element& g) const {
    const auto iv = u.interval_form();
    if (!iv) return std::nullopt;
    const auto set = *u.as_lamp_set();
    const Pos m = g.shift;
    if (m == 0 || iv->empty()) return SymbolicParts<Closed>{set, set, set, set, set};
    const Pos a = *iv->lo, b = *iv->hi;
    if (std::abs(m) > b - a + 1) return std::nullopt;
    const Closed right_half = Closed::vanishing_on(p_, Interval{a, std::nullopt});
    const Closed left_half = Closed::vanishing_on(p_, Interval{std::nullopt, b});
    const Closed trivial = Closed::trivial(p_);
    if (m > 0)
      return SymbolicParts<Closed>{right_half, left_half, trivial, Closed::eventually_zero_left(p_),
                                   Closed::eventually_zero_right(p_)};
    return SymbolicParts<Closed>{left_half, right_half, trivial, Closed::eventually_zero_right(p_),
                                 Closed::eventually_zero_left(p_)};
  }

  /// x = w_- w_+ with w_- ∈ U_-, w_+ ∈ U_+ (lamps commute, so this is a coordinate split).
  SplitResult<Element> split(const CompactOpen& u, const Element& g, const Element& x) const {
    SplitResult<Element> out;
    if (!u.contains(x)) {
      out.failure = "element " + format(x) + " is not in " + format(u);
      return out;
    }
    const auto iv = u.interval_form();
    if (!iv || (g.shift != 0 && !iv->empty() && std::abs(g.shift) > *iv->hi - *iv->lo + 1)) {
      out.failure = "no symbolic decomposition for " + format(u);
      return out;
    }
    if (g.shift == 0 || iv->empty()) {
      out.split = Split<Element>{x, identity()};
      return out;
    }
    const Pos a = *iv->lo, b = *iv->hi;
    const auto above = Element::lamp_only(x.lamp.restricted(b + 1, std::nullopt));
    const auto below = Element::lamp_only(x.lamp.restricted(std::nullopt, a - 1));
    out.split = g.shift > 0 ? Split<Element>{above, below} : Split<Element>{below, above};
    return out;
  }

  /// t = t' v with t' ∈ con(g^{-1}) ∩ U_+ and v ∈ U_0, for t ∈ U_+.
  std::pair<Element, Element> contraction_split(const CompactOpen& u, const Element& g, const Element& t) const {
    const auto parts = symbolic_parts(u, g);
    if (parts && parts->zero.is_trivial()) return {t, identity()};
    if (parts) return {identity(), t};
    throw UnsupportedElement("contraction_split: no symbolic parts for " + format(u));
  }

  /// A lamp δ_i in (g^j U_- g^{-j} ∩ U) \ U_- for the first j in 0, -1, ..., -horizon that has one.
  std::optional<BelowWitness<Element>> below_witness(const CompactOpen& u, const Element& g, int horizon) const {
    const auto parts = symbolic_parts(u, g);
    if (!parts) return std::nullopt;
    const auto set = *u.as_lamp_set();
    const Pos reach = static_cast<Pos>(horizon) * std::max<Pos>(1, std::abs(g.shift)) + u.level() + 2;
    for (int j = 0; j >= -horizon; --j) {
      const Closed v = parts->minus.shifted(static_cast<Pos>(j) * g.shift).intersect(set);
      for (Pos r = 0; r <= reach; ++r) {
        for (Pos i : {-r, r}) {
          if (parts->minus.constrains(i) && !v.constrains(i))
            return BelowWitness<Element>{Element::lamp_only(EPSeq::delta(p_, i)), j, false};
        }
      }
    }
    return std::nullopt;
  }

  // ---- dynamics oracles ----
  bool con_oracle(const Element& g, const Element& x) const { return con_set(g).contains(x); }
  /// Every conjugation orbit stays in the compact set L × {shift}.
  bool par_oracle(const Element&, const Element& x) const { return x.p() == p_; }

  Closed con_set(const Element& g) const {
    if (g.shift > 0) return Closed::eventually_zero_left(p_);
    if (g.shift < 0) return Closed::eventually_zero_right(p_);
    return Closed::trivial(p_);
  }
  /// par(g) ∩ L; the full parabolic also contains every shift.
  Closed par_set(const Element&) const { return Closed::full(p_); }
  /// rbco(g, W(k)).
  Closed rbco_set(const Element& g, int k) const {
    if (g.shift != 0) return con_set(g);
    return Closed::vanishing_on(p_, Interval{-k, k});
  }

  /// L for a nontrivial shift; W(depth) otherwise.
  std::optional<CompactOpen> tidy_subgroup(const Element& g, int depth = 0) const {
    return g.shift != 0 ? CompactOpen::full(p_) : CompactOpen::W(p_, depth);
  }

  /// Conjugation by g only permutes coordinates, so the scale is 1.
  std::uint64_t scale_formula(const Element&) const { return 1; }

  // ---- sampling ----
  Element random_in(const CompactOpen& u, std::mt19937_64& rng) const { return u.random_element(rng); }

  Element random_element(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> shift(-2, 2);
    return Element{random_finite_lamp(rng, -5, 5), shift(rng)};
  }

  /// Random elements of con(g) (with non-trivial periodic tail on the expanding side).
  std::vector<Element> con_samples(const Element& g, int count, std::mt19937_64& rng) const {
    std::vector<Element> out;
    if (g.shift == 0) {
      out.assign(static_cast<std::size_t>(std::max(count, 0)), identity());
      return out;
    }
    std::uniform_int_distribution<int> digit(0, p_ - 1);
    std::uniform_int_distribution<int> period(1, 3);
    std::uniform_int_distribution<int> core_len(0, 8);
    std::uniform_int_distribution<int> offset(-6, 4);
    for (int s = 0; s < count; ++s) {
      EPSeq::Word tail(static_cast<std::size_t>(period(rng)));
      for (auto& d : tail) d = digit(rng);
      EPSeq::Word core(static_cast<std::size_t>(core_len(rng)));
      for (auto& d : core) d = digit(rng);
      const Pos off = offset(rng);
      const EPSeq lamp = g.shift > 0 ? EPSeq(p_, {0}, core, off, tail) : EPSeq(p_, tail, core, off, {0});
      out.push_back(Element::lamp_only(lamp));
    }
    return out;
  }

  EPSeq random_finite_lamp(std::mt19937_64& rng, Pos lo, Pos hi) const {
    std::uniform_int_distribution<int> digit(0, p_ - 1);
    std::vector<std::pair<Pos, int>> terms;
    for (Pos i = lo; i <= hi; ++i) terms.emplace_back(i, digit(rng));
    return EPSeq::from_support(p_, terms);
  }

 private:
  int p_;
};

}  // namespace tdlc::shift
