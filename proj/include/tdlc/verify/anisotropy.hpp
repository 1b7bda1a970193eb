#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/shift/model.hpp"
#include "tdlc/verify/tits_core.hpp"

namespace tdlc::verify {

enum class NormalKind { LampSubgroup, Trivial };

inline std::string to_string(NormalKind k) { return k == NormalKind::LampSubgroup ? "lamp-subgroup" : "trivial"; }

/// A closed normal subgroup N of the lamplighter-type group and the induced quotient:
/// the lamp subgroup gives the discrete quotient Z, the trivial subgroup gives G itself.
struct QuotientDescriptor {
  shift::ShiftModel model;
  NormalKind kind = NormalKind::Trivial;

  shift::LampSet normal_subgroup() const {
    return kind == NormalKind::LampSubgroup ? shift::LampSet::full(model.p()) : shift::LampSet::trivial(model.p());
  }
  std::string quotient_tag() const { return kind == NormalKind::LampSubgroup ? "Z" : "G"; }
  bool in_normal(const shift::ShiftElement& x) const {
    return kind == NormalKind::LampSubgroup ? x.shift == 0 : x.is_identity();
  }
  /// con of the image of g in G/N is trivial.
  bool quotient_con_trivial(const shift::ShiftElement& g) const {
    // Z is discrete, so every contraction group there is trivial.
    if (kind == NormalKind::LampSubgroup) return true;
    return model.con_set(g).is_trivial();
  }
};

struct AnisotropyRow {
  std::string element;
  bool pushforward = false;  ///< con(g)N maps onto con(gN)
  bool quotient_con_trivial = false;
};

struct AnisotropyReport {
  int level = 0;
  bool normal = false;  ///< sampled normality check
  std::vector<AnisotropyRow> rows;
  bool core_in_normal = false;       ///< Tits core window image lies in the image of N
  bool quotient_anisotropic = false;  ///< every quotient contraction group over the schedule is trivial
  bool pass = false;
};

/// Checks, over a schedule, that con(g)·N is the preimage of con(gN) and that the Tits
/// core image lies in N exactly when the quotient is anisotropic over the schedule.
inline AnisotropyReport quotient_anisotropy_check(const QuotientDescriptor& q,
                                                  const std::vector<shift::ShiftElement>& schedule, int level,
                                                  std::mt19937_64& rng, int samples = 50) {
  const auto& model = q.model;
  AnisotropyReport rep;
  rep.level = level;
  rep.normal = true;
  const auto ref = model.reference();
  for (int i = 0; i < samples; ++i) {
    const auto g = model.random_element(rng);
    const auto x = q.kind == NormalKind::LampSubgroup ? model.random_in(ref, rng) : model.identity();
    if (!q.in_normal(model.conj(g, x))) rep.normal = false;
  }
  const auto n_set = q.normal_subgroup();
  const auto n_image = model.image(n_set, level);
  rep.quotient_anisotropic = true;
  bool all_push = true;
  for (const auto& g : schedule) {
    AnisotropyRow row;
    row.element = model.format(g);
    row.quotient_con_trivial = q.quotient_con_trivial(g);
    // Window form: con(g)·N against the preimage of con(gN), which is N when the quotient
    // contraction group is trivial and con(g) itself when the quotient is G.
    const auto con_image = model.image(model.closure(model.con_set(g)), level);
    const auto lhs = kernel::join(model.window(level), con_image, n_image);
    const auto preimage = row.quotient_con_trivial ? n_image : con_image;
    row.pushforward = lhs == preimage;
    // Sample form: each sampled c ∈ con(g) maps into con(gN).
    for (const auto& c : model.con_samples(g, 8, rng)) {
      const bool maps_in = q.kind == NormalKind::LampSubgroup ? c.shift == 0 : model.con_oracle(g, c);
      if (!maps_in) row.pushforward = false;
    }
    all_push = all_push && row.pushforward;
    rep.quotient_anisotropic = rep.quotient_anisotropic && row.quotient_con_trivial;
    rep.rows.push_back(row);
  }
  const auto core = tits_core_image(model, level, schedule);
  rep.core_in_normal = kernel::is_subset(core.image, n_image);
  rep.pass = rep.normal && all_push && rep.core_in_normal == rep.quotient_anisotropic;
  return rep;
}

}  // namespace tdlc::verify
