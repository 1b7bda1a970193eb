#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/kernel/window.hpp"

namespace tdlc::kernel {

/// The additive group F_p^{[-K,K]}: the lamp group modulo the lamps vanishing on [-K,K].
///
/// Coordinate i is digit i+K of the base-p code.
class LampWindow {
 public:
  LampWindow(int p, int level) : p_(p), level_(level) {
    if (p < 2) throw Error("LampWindow: bad prime");
    if (level < 0) throw Error("LampWindow: negative level");
    order_ = 1;
    for (int i = 0; i < width(); ++i) {
      if (order_ > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p)) throw Error("LampWindow: code overflow");
      order_ *= static_cast<std::uint64_t>(p);
    }
  }

  WindowId id() const { return {"lamp", p_, 1, level_}; }
  int p() const { return p_; }
  int level() const { return level_; }
  int width() const { return 2 * level_ + 1; }
  std::uint64_t order() const { return order_; }
  Code identity() const { return 0; }

  std::vector<int> decode(Code c) const {
    std::vector<int> d(width());
    for (int j = 0; j < width(); ++j) {
      d[j] = static_cast<int>(c % p_);
      c /= p_;
    }
    return d;
  }

  Code encode(const std::vector<int>& digits) const {
    Code c = 0;
    for (int j = width() - 1; j >= 0; --j) c = c * p_ + static_cast<Code>(((digits[j] % p_) + p_) % p_);
    return c;
  }

  /// Value at coordinate i ∈ [-K, K].
  int coordinate(Code c, int i) const { return decode(c)[i + level_]; }

  Code mul(Code a, Code b) const {
    if (p_ == 2) return a ^ b;
    auto x = decode(a);
    auto y = decode(b);
    for (int j = 0; j < width(); ++j) x[j] = (x[j] + y[j]) % p_;
    return encode(x);
  }

  Code inv(Code a) const {
    auto x = decode(a);
    for (auto& v : x) v = (p_ - v) % p_;
    return encode(x);
  }

  /// Image of a code under the projection to a coarser level.
  Code project_to(Code c, const LampWindow& coarse) const {
    if (coarse.p_ != p_ || coarse.level_ > level_) throw WindowMismatch("LampWindow: not a coarser window");
    const auto d = decode(c);
    std::vector<int> out(coarse.width());
    for (int i = -coarse.level_; i <= coarse.level_; ++i) out[i + coarse.level_] = d[i + level_];
    return coarse.encode(out);
  }

  std::string format(Code c) const {
    const auto d = decode(c);
    std::string s = "[";
    for (int j = 0; j < width(); ++j) s += static_cast<char>('0' + d[j]);
    return s + "]@" + std::to_string(-level_);
  }

  /// Every element, ascending.
  std::vector<Code> all_elements(std::uint64_t cap = kDefaultCap) const {
    if (order_ > cap) throw ResolutionTooFine(cap);
    std::vector<Code> v(order_);
    for (Code c = 0; c < order_; ++c) v[c] = c;
    return v;
  }

 private:
  int p_;
  int level_;
  std::uint64_t order_;
};

}  // namespace tdlc::kernel
