#pragma once

#include <cstdint>
#include <string>

#include "tdlc/shift/epseq.hpp"

namespace tdlc::shift {

/// Element (a, m) of F_p^Z ⋊ Z with (a,m)(b,n) = (a + σ^m b, m + n).
struct ShiftElement {
  EPSeq lamp;
  Pos shift = 0;

  static ShiftElement identity(int p) { return {EPSeq::zero(p), 0}; }
  static ShiftElement translation(int p, Pos m) { return {EPSeq::zero(p), m}; }
  static ShiftElement lamp_only(EPSeq a) { return {std::move(a), 0}; }

  int p() const { return lamp.p(); }
  bool is_identity() const { return shift == 0 && lamp.is_zero(); }

  friend bool operator==(const ShiftElement&, const ShiftElement&) = default;
};

inline ShiftElement operator*(const ShiftElement& x, const ShiftElement& y) {
  if (x.p() != y.p()) throw PrimeMismatch(x.p(), y.p());
  return {x.lamp + y.lamp.shifted(x.shift), x.shift + y.shift};
}

inline ShiftElement inverse(const ShiftElement& x) { return {-(x.lamp.shifted(-x.shift)), -x.shift}; }

inline ShiftElement power(const ShiftElement& x, std::int64_t k) {
  ShiftElement base = k >= 0 ? x : inverse(x);
  std::uint64_t e = static_cast<std::uint64_t>(k >= 0 ? k : -k);
  ShiftElement acc = ShiftElement::identity(x.p());
  while (e) {
    if (e & 1u) acc = acc * base;
    base = base * base;
    e >>= 1u;
  }
  return acc;
}

/// g x g^{-1}
inline ShiftElement conjugate(const ShiftElement& g, const ShiftElement& x) { return g * x * inverse(g); }

}  // namespace tdlc::shift
