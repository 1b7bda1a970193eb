#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/kernel/window.hpp"

namespace tdlc::verify {

struct IdentityCheck {
  std::string name;
  bool holds = true;
  int failing_level = -1;
  std::string note;  ///< set when the identity could not be evaluated
};

struct StructureReport {
  std::vector<IdentityCheck> checks;
  bool tidy = false;  ///< whether the tidy-only identities were included

  bool pass() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return !checks.empty();
  }
};

/// Window-image checks, at every level 0..K, of
///   U_{--} = con(g)·U_0 and U_{++} = con(g^{-1})·U_0,
///   U_- = (con(g) ∩ U_-)·U_0 and U_+ = (con(g^{-1}) ∩ U_+)·U_0,
/// and, when U is tidy for g, U_- = (con(g) ∩ U)·U_0 and U_+ = (con(g^{-1}) ∩ U)·U_0.
/// Requires symbolic parts; throws UnsupportedElement otherwise.
template <class M>
StructureReport structure_identities(const M& model, const typename M::CompactOpen& u, const typename M::Element& g,
                                     int level, bool tidy, std::uint64_t cap = kernel::kDefaultCap) {
  using dynamics::Part;
  const auto parts = dynamics::u_parts(model, u, g, level, -1, cap);
  if (!parts.is_symbolic()) throw UnsupportedElement("structure_identities: no symbolic parts for " + model.format(u));
  const auto con_fwd = model.con_set(g);
  const auto con_bwd = model.con_set(model.inv(g));
  StructureReport rep;
  rep.tidy = tidy;
  const auto check = [&](const std::string& name, const auto& lhs_closed, const auto& factor_closed) {
    IdentityCheck c{name, true, -1, ""};
    for (int k = 0; k <= level && c.holds; ++k) {
      const auto w = model.window(k);
      const auto target = model.image(lhs_closed, k, cap);
      const auto factor = model.image(factor_closed, k, cap);
      const auto zero = model.image(parts.closed(Part::Zero), k, cap);
      if (!kernel::product_set_equals(w, factor, zero, target).equal) {
        c.holds = false;
        c.failing_level = k;
      }
    }
    rep.checks.push_back(c);
  };
  check("minus-minus", parts.closed(Part::MinusMinus), con_fwd);
  check("plus-plus", parts.closed(Part::PlusPlus), con_bwd);
  check("minus", parts.closed(Part::Minus), model.intersect(con_fwd, parts.closed(Part::Minus)));
  check("plus", parts.closed(Part::Plus), model.intersect(con_bwd, parts.closed(Part::Plus)));
  if (tidy) {
    const auto closed_u = model.as_closed(u);
    if (!closed_u) throw UnsupportedElement("structure_identities: U has no closed form");
    check("minus-tidy", parts.closed(Part::Minus), model.intersect(con_fwd, *closed_u));
    check("plus-tidy", parts.closed(Part::Plus), model.intersect(con_bwd, *closed_u));
  }
  return rep;
}

}  // namespace tdlc::verify
