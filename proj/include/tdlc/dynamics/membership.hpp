#pragma once

#include <string>

#include "tdlc/error.hpp"
#include "tdlc/level.hpp"

namespace tdlc::dynamics {

struct Membership {
  Verdict verdict = Verdict::Inconclusive;
  std::string method;  ///< "oracle" or "trajectory"
  int first_reached = -1;  ///< trajectory only: first n with proximity >= K
};

/// g^n x g^{-n} for n <= N: true-at-resolution when the trajectory enters the level-K
/// neighbourhood and stays there up to step N, inconclusive otherwise.
template <class M>
Membership con_trajectory(const M& model, const typename M::Element& g, const typename M::Element& x, int level,
                          int steps) {
  Membership out{Verdict::Inconclusive, "trajectory", -1};
  auto y = x;
  for (int n = 0; n <= steps; ++n) {
    const bool close = model.proximity(y).at_least(level);
    if (close && out.first_reached < 0) out.first_reached = n;
    if (!close && out.first_reached >= 0) {
      out.first_reached = -1;  // left the neighbourhood again; start over
    }
    y = model.conj(g, y);
  }
  if (out.first_reached >= 0) out.verdict = Verdict::True;
  return out;
}

/// x ∈ con(g): exact through the model oracle, otherwise the trajectory test.
template <class M>
Membership con_membership(const M& model, const typename M::Element& g, const typename M::Element& x, int level,
                          int steps) {
  try {
    return {model.con_oracle(g, x) ? Verdict::True : Verdict::False, "oracle", -1};
  } catch (const UnsupportedElement&) {
  }
  return con_trajectory(model, g, x, level, steps);
}

/// x ∈ par(g): exact through the model oracle, otherwise true-at-resolution when
/// g^n x g^{-n} stays in x·U_ref for every n <= N.
template <class M>
Membership par_membership(const M& model, const typename M::Element& g, const typename M::Element& x, int steps) {
  try {
    return {model.par_oracle(g, x) ? Verdict::True : Verdict::False, "oracle", -1};
  } catch (const UnsupportedElement&) {
  }
  const auto xinv = model.inv(x);
  auto y = x;
  for (int n = 0; n <= steps; ++n) {
    if (!model.in_reference(model.mul(xinv, y))) return {Verdict::Inconclusive, "trajectory", -1};
    y = model.conj(g, y);
  }
  return {Verdict::True, "trajectory", -1};
}

}  // namespace tdlc::dynamics
