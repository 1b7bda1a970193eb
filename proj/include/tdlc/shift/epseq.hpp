#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/error.hpp"

namespace tdlc::shift {

using Pos = std::int64_t;

/// Eventually periodic bi-infinite sequence over F_p.
///
/// Below `offset` the sequence reads the left word periodically, anchored so that
/// left[(i - offset) mod |left|] is the value at i. The core occupies
/// [offset, offset + |core|), and from there on the right word repeats, anchored at the
/// end of the core. Every instance is canonical: primitive periods, minimal core, and the
/// leftmost admissible boundary; a globally periodic sequence has an empty core at offset 0.
class EPSeq {
 public:
  using Word = std::vector<int>;

  EPSeq() : EPSeq(2) {}
  explicit EPSeq(int p) : p_(p), left_{0}, right_{0}, offset_(0) { check_prime(p); }

  EPSeq(int p, Word left, Word core, Pos offset, Word right)
      : p_(p), left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), offset_(offset) {
    check_prime(p);
    if (left_.empty() || right_.empty()) throw Error("EPSeq: periodic words must be nonempty");
    for (auto* w : {&left_, &core_, &right_})
      for (auto& x : *w) x = ((x % p_) + p_) % p_;
    canonicalize();
  }

  static EPSeq zero(int p) { return EPSeq(p); }
  static EPSeq constant(int p, int c) { return EPSeq(p, {c}, {}, 0, {c}); }
  static EPSeq delta(int p, Pos i, int c = 1) { return EPSeq(p, {0}, {c}, i, {0}); }

  /// Finitely supported sequence from (position, coefficient) pairs; repeated positions add.
  static EPSeq from_support(int p, const std::vector<std::pair<Pos, int>>& terms) {
    EPSeq out(p);
    for (const auto& [i, c] : terms) out = out + delta(p, i, c);
    return out;
  }

  /// Indicator of [lo, hi]; nullopt bounds are infinite.
  static EPSeq indicator(int p, std::optional<Pos> lo, std::optional<Pos> hi) {
    if (lo && hi && *hi < *lo) return zero(p);
    if (!lo && !hi) return constant(p, 1);
    if (!lo) return EPSeq(p, {1}, {}, *hi + 1, {0});
    if (!hi) return EPSeq(p, {0}, {}, *lo, {1});
    return EPSeq(p, {0}, Word(static_cast<std::size_t>(*hi - *lo + 1), 1), *lo, {0});
  }

  int p() const { return p_; }
  const Word& left() const { return left_; }
  const Word& core() const { return core_; }
  const Word& right() const { return right_; }
  Pos offset() const { return offset_; }
  Pos end() const { return offset_ + static_cast<Pos>(core_.size()); }

  int at(Pos i) const {
    if (i < offset_) return left_tail(i);
    if (i >= end()) return right_tail(i);
    return core_[static_cast<std::size_t>(i - offset_)];
  }

  bool left_is_zero() const { return left_.size() == 1 && left_[0] == 0; }
  bool right_is_zero() const { return right_.size() == 1 && right_[0] == 0; }
  bool is_zero() const { return left_is_zero() && right_is_zero() && core_.empty(); }
  bool finitely_supported() const { return left_is_zero() && right_is_zero(); }

  /// Positions carrying a nonzero value, for finitely supported sequences.
  std::vector<std::pair<Pos, int>> support() const {
    if (!finitely_supported()) throw Error("EPSeq::support: not finitely supported");
    std::vector<std::pair<Pos, int>> out;
    for (Pos i = offset_; i < end(); ++i)
      if (at(i) != 0) out.emplace_back(i, at(i));
    return out;
  }

  /// True when every coordinate in [lo, hi] is zero; nullopt bounds are infinite.
  bool zero_on(std::optional<Pos> lo, std::optional<Pos> hi) const {
    if (lo && hi && *hi < *lo) return true;
    const auto all_zero = [](const Word& w) { return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; }); };
    // left tail region (-inf, offset - 1]
    {
      const Pos h = hi ? std::min(*hi, offset_ - 1) : offset_ - 1;
      if (!lo || *lo <= h) {
        if (!lo || h - *lo + 1 >= static_cast<Pos>(left_.size())) {
          if (!all_zero(left_)) return false;
        } else {
          for (Pos i = *lo; i <= h; ++i)
            if (left_tail(i) != 0) return false;
        }
      }
    }
    {
      const Pos l = lo ? std::max(*lo, offset_) : offset_;
      const Pos h = hi ? std::min(*hi, end() - 1) : end() - 1;
      for (Pos i = l; i <= h; ++i)
        if (at(i) != 0) return false;
    }
    {
      const Pos l = lo ? std::max(*lo, end()) : end();
      if (!hi || l <= *hi) {
        if (!hi || *hi - l + 1 >= static_cast<Pos>(right_.size())) {
          if (!all_zero(right_)) return false;
        } else {
          for (Pos i = l; i <= *hi; ++i)
            if (right_tail(i) != 0) return false;
        }
      }
    }
    return true;
  }

  /// Smallest |i| with a nonzero coordinate; nullopt for the zero sequence.
  std::optional<Pos> nearest_support() const {
    if (is_zero()) return std::nullopt;
    const Pos bound = std::max(std::abs(offset_), std::abs(end())) +
                      static_cast<Pos>(std::max(left_.size(), right_.size())) + 1;
    for (Pos r = 0; r <= bound; ++r)
      if (at(r) != 0 || at(-r) != 0) return r;
    throw Error("EPSeq::nearest_support: inconsistent representation");
  }

  /// σ^s: (σ^s a)_i = a_{i-s}.
  EPSeq shifted(Pos s) const {
    EPSeq out = *this;
    out.offset_ += s;
    if (out.core_.empty() && out.left_ == out.right_) out.canonicalize();
    return out;
  }

  template <class F>
  static EPSeq combine(const EPSeq& a, const EPSeq& b, F f) {
    if (a.p_ != b.p_) throw PrimeMismatch(a.p_, b.p_);
    const int p = a.p_;
    const Pos o = std::min(a.offset_, b.offset_);
    const Pos e = std::max(a.end(), b.end());
    const std::size_t nl = std::lcm(a.left_.size(), b.left_.size());
    const std::size_t nr = std::lcm(a.right_.size(), b.right_.size());
    Word left(nl), core(static_cast<std::size_t>(e - o)), right(nr);
    for (std::size_t j = 0; j < nl; ++j) {
      const Pos i = o + static_cast<Pos>(j);
      left[j] = f(a.left_tail(i), b.left_tail(i));
    }
    for (Pos i = o; i < e; ++i) core[static_cast<std::size_t>(i - o)] = f(a.at(i), b.at(i));
    for (std::size_t j = 0; j < nr; ++j) {
      const Pos i = e + static_cast<Pos>(j);
      right[j] = f(a.right_tail(i), b.right_tail(i));
    }
    return EPSeq(p, std::move(left), std::move(core), o, std::move(right));
  }

  friend EPSeq operator+(const EPSeq& a, const EPSeq& b) {
    const int p = a.p_;
    return combine(a, b, [p](int x, int y) { return (x + y) % p; });
  }
  friend EPSeq operator-(const EPSeq& a, const EPSeq& b) {
    const int p = a.p_;
    return combine(a, b, [p](int x, int y) { return (x - y + p) % p; });
  }
  EPSeq operator-() const { return zero(p_) - *this; }

  /// Pointwise product, e.g. with an indicator.
  EPSeq times(const EPSeq& b) const {
    const int p = p_;
    return combine(*this, b, [p](int x, int y) { return (x * y) % p; });
  }

  EPSeq restricted(std::optional<Pos> lo, std::optional<Pos> hi) const { return times(indicator(p_, lo, hi)); }

  friend bool operator==(const EPSeq&, const EPSeq&) = default;

 private:
  static void check_prime(int p) {
    if (p < 2 || p > 7 || p == 4 || p == 6) throw Error("EPSeq: supported primes are 2, 3, 5, 7");
  }

  static Pos mod(Pos a, Pos n) { return ((a % n) + n) % n; }

  int left_tail(Pos i) const { return left_[static_cast<std::size_t>(mod(i - offset_, static_cast<Pos>(left_.size())))]; }
  int right_tail(Pos i) const { return right_[static_cast<std::size_t>(mod(i - end(), static_cast<Pos>(right_.size())))]; }

  static Word primitive_root(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d <= n; ++d) {
      if (n % d) continue;
      bool ok = true;
      for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i % d];
      if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return w;
  }

  void canonicalize() {
    left_ = primitive_root(left_);
    right_ = primitive_root(right_);
    const Pos o0 = offset_;
    const Pos e0 = end();
    const Pos span = static_cast<Pos>(std::lcm(left_.size(), right_.size()));
    std::optional<Pos> first_left_mismatch;
    for (Pos i = o0; i < e0 + span; ++i)
      if (at(i) != left_tail(i)) {
        first_left_mismatch = i;
        break;
      }
    std::optional<Pos> last_right_mismatch;
    for (Pos i = e0 - 1; i >= o0 - span; --i)
      if (at(i) != right_tail(i)) {
        last_right_mismatch = i;
        break;
      }
    Word new_left(left_.size()), new_right(right_.size()), new_core;
    Pos new_offset;
    if (!first_left_mismatch || !last_right_mismatch) {
      // globally periodic
      new_offset = 0;
      for (std::size_t j = 0; j < left_.size(); ++j) new_left[j] = left_tail(static_cast<Pos>(j));
      new_right = new_left;
    } else {
      const Pos fl = *first_left_mismatch;
      const Pos lr = *last_right_mismatch;
      if (fl <= lr) {
        new_offset = fl;
        for (Pos i = fl; i <= lr; ++i) new_core.push_back(at(i));
      } else {
        new_offset = lr + 1;
      }
      const Pos new_end = new_offset + static_cast<Pos>(new_core.size());
      for (std::size_t j = 0; j < left_.size(); ++j) new_left[j] = left_tail(new_offset + static_cast<Pos>(j));
      for (std::size_t j = 0; j < right_.size(); ++j) new_right[j] = right_tail(new_end + static_cast<Pos>(j));
    }
    left_ = std::move(new_left);
    right_ = std::move(new_right);
    core_ = std::move(new_core);
    offset_ = new_offset;
  }

  int p_;
  Word left_;
  Word core_;
  Word right_;
  Pos offset_;
};

}  // namespace tdlc::shift
