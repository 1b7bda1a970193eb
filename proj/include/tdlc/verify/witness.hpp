#pragma once

#include "tdlc/error.hpp"
#include "tdlc/shift/element.hpp"

namespace tdlc::verify {

struct NormalClosureWitness {
  shift::EPSeq a;
  shift::ShiftElement product;  ///< (a,0)(0,1)(a,0)^{-1}(0,1)^{-1}
  bool replay = false;          ///< product == (b,0)
};

/// Writes a finitely supported b as a product of a conjugate of the unit shift and the
/// inverse shift: a_i = Σ_{m ≤ i} b_m, so a − σ(a) = b.
inline NormalClosureWitness normal_closure_witness(const shift::EPSeq& b) {
  if (!b.finitely_supported())
    throw UnsupportedElement("normal_closure_witness: b must be finitely supported");
  const int p = b.p();
  shift::EPSeq::Word core;
  int sum = 0;
  shift::Pos lo = b.offset();
  for (shift::Pos i = lo; i < b.end(); ++i) {
    sum = (sum + b.at(i)) % p;
    core.push_back(sum);
  }
  NormalClosureWitness w;
  w.a = shift::EPSeq(p, {0}, core, lo, {sum});
  const auto la = shift::ShiftElement::lamp_only(w.a);
  const auto g = shift::ShiftElement::translation(p, 1);
  w.product = la * g * shift::inverse(la) * shift::inverse(g);
  w.replay = w.product == shift::ShiftElement::lamp_only(b);
  return w;
}

}  // namespace tdlc::verify
