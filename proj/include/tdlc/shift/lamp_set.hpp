#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tdlc/kernel/fp_subspace.hpp"
#include "tdlc/kernel/lamp_window.hpp"
#include "tdlc/kernel/window.hpp"
#include "tdlc/shift/element.hpp"

namespace tdlc::shift {

/// Coordinate interval; a missing bound is infinite.
struct Interval {
  std::optional<Pos> lo;
  std::optional<Pos> hi;

  bool empty() const { return lo && hi && *hi < *lo; }
  bool contains(Pos i) const { return (!lo || *lo <= i) && (!hi || i <= *hi); }
  Interval shifted(Pos s) const {
    return {lo ? std::optional<Pos>(*lo + s) : std::nullopt, hi ? std::optional<Pos>(*hi + s) : std::nullopt};
  }
  friend bool operator==(const Interval&, const Interval&) = default;

  std::string to_string() const {
    return (lo ? "[" + std::to_string(*lo) : std::string("(-inf")) + "," + (hi ? std::to_string(*hi) + "]" : "+inf)");
  }
};

/// Symbolic lamp-only subgroup: lamps vanishing on a union of intervals, optionally
/// further required to be eventually zero towards -inf and/or +inf.
///
/// Without tail flags the set is closed; a flag makes it a dense non-closed subgroup of
/// its closure. Every window image ignores the flags.
class LampSet {
 public:
  explicit LampSet(int p, std::vector<Interval> vanish = {}, bool left_zero = false, bool right_zero = false)
      : p_(p), vanish_(std::move(vanish)), left_zero_(left_zero), right_zero_(right_zero) {
    normalize();
  }

  static LampSet full(int p) { return LampSet(p); }
  static LampSet trivial(int p) { return LampSet(p, {Interval{}}); }
  static LampSet vanishing_on(int p, Interval iv) { return LampSet(p, {iv}); }
  static LampSet eventually_zero_left(int p) { return LampSet(p, {}, true, false); }
  static LampSet eventually_zero_right(int p) { return LampSet(p, {}, false, true); }

  int p() const { return p_; }
  const std::vector<Interval>& vanish() const { return vanish_; }
  bool left_zero() const { return left_zero_; }
  bool right_zero() const { return right_zero_; }
  bool is_closed() const { return !left_zero_ && !right_zero_; }
  bool is_trivial() const { return vanish_.size() == 1 && !vanish_[0].lo && !vanish_[0].hi; }
  bool is_full() const { return vanish_.empty() && is_closed(); }

  LampSet closure() const { return LampSet(p_, vanish_); }

  LampSet intersect(const LampSet& o) const {
    if (o.p_ != p_) throw PrimeMismatch(p_, o.p_);
    auto v = vanish_;
    v.insert(v.end(), o.vanish_.begin(), o.vanish_.end());
    return LampSet(p_, v, left_zero_ || o.left_zero_, right_zero_ || o.right_zero_);
  }

  /// Image under conjugation by any element with shift component s.
  LampSet shifted(Pos s) const {
    std::vector<Interval> v;
    for (const auto& iv : vanish_) v.push_back(iv.shifted(s));
    return LampSet(p_, v, left_zero_, right_zero_);
  }

  bool contains(const ShiftElement& x) const {
    if (x.shift != 0 || x.p() != p_) return false;
    for (const auto& iv : vanish_)
      if (!x.lamp.zero_on(iv.lo, iv.hi)) return false;
    if (left_zero_ && !x.lamp.left_is_zero()) return false;
    if (right_zero_ && !x.lamp.right_is_zero()) return false;
    return true;
  }

  bool constrains(Pos i) const {
    return std::any_of(vanish_.begin(), vanish_.end(), [i](const Interval& iv) { return iv.contains(i); });
  }

  /// Image in F_p^{[-K,K]}: the coordinate subspace on the unconstrained positions.
  kernel::SubgroupImage image(int level, std::uint64_t cap = kernel::kDefaultCap) const {
    const kernel::LampWindow w(p_, level);
    std::vector<Pos> free;
    for (Pos i = -level; i <= level; ++i)
      if (!constrains(i)) free.push_back(i);
    std::vector<kernel::FpSubspace::Vec> rows;
    for (Pos i : free) {
      kernel::FpSubspace::Vec v(w.width(), 0);
      v[i + level] = 1;
      rows.push_back(v);
    }
    return kernel::trusted_subgroup(w.id(), kernel::FpSubspace(p_, -level, level, rows).codes(w, cap));
  }

  friend bool operator==(const LampSet&, const LampSet&) = default;

  std::string to_string() const {
    std::string s = "lamps";
    if (is_trivial()) return "trivial";
    if (!vanish_.empty()) {
      s += " vanishing on ";
      for (std::size_t i = 0; i < vanish_.size(); ++i) s += (i ? "∪" : "") + vanish_[i].to_string();
    }
    if (left_zero_) s += ", eventually zero at -inf";
    if (right_zero_) s += ", eventually zero at +inf";
    return s;
  }

 private:
  void normalize() {
    std::vector<Interval> v;
    for (const auto& iv : vanish_)
      if (!iv.empty()) v.push_back(iv);
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
      if (!a.lo) return static_cast<bool>(b.lo);
      if (!b.lo) return false;
      return *a.lo < *b.lo;
    });
    std::vector<Interval> merged;
    for (const auto& iv : v) {
      if (!merged.empty()) {
        auto& last = merged.back();
        const bool touches = !last.hi || !iv.lo || *iv.lo <= *last.hi + 1;
        if (touches) {
          if (!last.hi || !iv.hi)
            last.hi.reset();
          else
            last.hi = std::max(*last.hi, *iv.hi);
          continue;
        }
      }
      merged.push_back(iv);
    }
    vanish_ = std::move(merged);
    for (const auto& iv : vanish_) {
      if (!iv.lo) left_zero_ = false;
      if (!iv.hi) right_zero_ = false;
    }
  }

  int p_;
  std::vector<Interval> vanish_;
  bool left_zero_;
  bool right_zero_;
};

}  // namespace tdlc::shift
