#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "tdlc/dynamics/membership.hpp"
#include "tdlc/dynamics/nub.hpp"
#include "tdlc/error.hpp"

namespace tdlc::limits {

struct TransportReport {
  int forward_checked = 0;   ///< c ∈ con(g) with t c t^{-1} ∈ con(gu)
  int backward_checked = 0;  ///< c' ∈ con(gu) with t^{-1} c' t ∈ con(g)
  int inconclusive = 0;      ///< trajectory fallback could not decide
  std::string note;
};

/// t con(g) t^{-1} = con(gu), checked on sampled elements of both sides. The conjugator
/// from a finite number of steps is only an approximation, so a moved sample counts as
/// checked when the exact oracle accepts it or its trajectory settles at the given level
/// within trajectory_steps (keep this below the step count minus the level). A sample
/// rejected both ways raises CheckFailed.
template <class M>
TransportReport con_transport_check(const M& model, const typename M::Element& g, const typename M::Element& u,
                                    const typename M::Element& t, int sample_size, std::mt19937_64& rng,
                                    int level = 4, int trajectory_steps = 8) {
  TransportReport rep;
  const auto gu = model.mul(g, u);
  const auto tinv = model.inv(t);
  const auto check = [&](const typename M::Element& h, const typename M::Element& moved,
                         const typename M::Element& c, const char* side) {
    std::optional<bool> exact;
    try {
      exact = model.con_oracle(h, moved);
    } catch (const UnsupportedElement&) {
    }
    if (exact == true) return true;
    if (dynamics::con_trajectory(model, h, moved, level, trajectory_steps).verdict == Verdict::True) return true;
    if (exact == false)
      throw CheckFailed(std::string("con_transport_check: ") + side + " counterexample " + model.format(c));
    ++rep.inconclusive;
    return false;
  };
  for (const auto& c : model.con_samples(g, sample_size, rng)) {
    const auto moved = model.mul(model.mul(t, c), tinv);
    if (check(gu, moved, c, "forward")) ++rep.forward_checked;
  }
  std::vector<typename M::Element> back;
  try {
    back = model.con_samples(gu, sample_size, rng);
  } catch (const UnsupportedElement& e) {
    rep.note = std::string("no samples of con(gu): ") + e.what();
  }
  for (const auto& c : back) {
    const auto moved = model.mul(model.mul(tinv, c), t);
    if (check(g, moved, c, "backward")) ++rep.backward_checked;
  }
  return rep;
}

struct NubTransportReport {
  kernel::SubgroupImage conjugated;  ///< image of r nub(g) r^{-1}
  kernel::SubgroupImage target;      ///< image of nub(gu)
};

/// Image of r·S·r^{-1} for r in the reference subgroup.
template <class M>
kernel::SubgroupImage conjugate_image(const M& model, const kernel::SubgroupImage& s, const typename M::Element& r,
                                      int level) {
  const auto w = model.window(level);
  const auto rc = model.project(r, level), rinv = w.inv(rc);
  std::vector<kernel::Code> out;
  out.reserve(s.size());
  for (auto c : s.elements()) out.push_back(w.mul(w.mul(rc, c), rinv));
  return kernel::SubgroupImage(w.id(), std::move(out));
}

/// r nub(g) r^{-1} = nub(gu) at level K; inequality raises CheckFailed.
template <class M>
NubTransportReport nub_transport_check(const M& model, const typename M::Element& g, const typename M::Element& u,
                                       const typename M::Element& r, int level, int conj_range = 3) {
  const auto nub_g = dynamics::nub_compute(model, g, level, conj_range).image;
  const auto nub_gu = dynamics::nub_compute(model, model.mul(g, u), level, conj_range).image;
  NubTransportReport rep{conjugate_image(model, nub_g, r, level), nub_gu};
  if (!(rep.conjugated == rep.target))
    throw CheckFailed("nub_transport_check: r nub(g) r^{-1} has " + std::to_string(rep.conjugated.size()) +
                      " elements at level " + std::to_string(level) + ", nub(gu) has " + std::to_string(rep.target.size()));
  return rep;
}

}  // namespace tdlc::limits
