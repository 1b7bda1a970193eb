#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/kernel/window.hpp"
#include "tdlc/level.hpp"
#include "tdlc/model_types.hpp"

namespace tdlc::dynamics {

enum class Part { Plus, Minus, Zero, MinusMinus, PlusPlus };

inline const char* to_string(Part p) {
  switch (p) {
    case Part::Plus: return "U_+";
    case Part::Minus: return "U_-";
    case Part::Zero: return "U_0";
    case Part::MinusMinus: return "U_--";
    case Part::PlusPlus: return "U_++";
  }
  return "?";
}

/// U_+, U_-, U_0 (and, symbolically, U_{--}, U_{++}) of U relative to g.
template <class M>
struct UParts {
  typename M::CompactOpen u;
  typename M::Element g;
  std::optional<SymbolicParts<typename M::Closed>> symbolic;
  WindowParts window;  ///< filled only when no symbolic form exists
  int level = 0;

  bool is_symbolic() const { return symbolic.has_value(); }
  bool conclusive() const { return is_symbolic() || window.conclusive; }

  const typename M::Closed& closed(Part p) const {
    if (!symbolic) throw Error("UParts: no symbolic form");
    switch (p) {
      case Part::Plus: return symbolic->plus;
      case Part::Minus: return symbolic->minus;
      case Part::Zero: return symbolic->zero;
      case Part::MinusMinus: return symbolic->minus_minus;
      case Part::PlusPlus: return symbolic->plus_plus;
    }
    throw Error("UParts: bad part");
  }
};

/// Window image of a part at level k (k <= parts.level for window-only parts).
template <class M>
kernel::SubgroupImage part_image(const M& model, const UParts<M>& parts, Part p, int k,
                                 std::uint64_t cap = kernel::kDefaultCap) {
  if (parts.symbolic) return model.image(parts.closed(p), k, cap);
  if (k > parts.level) throw Error("part_image: level above the computed resolution");
  switch (p) {
    case Part::Plus: return parts.window.plus.at(k);
    case Part::Minus: return parts.window.minus.at(k);
    case Part::Zero: return parts.window.zero.at(k);
    case Part::MinusMinus: return parts.window.minus_minus.at(k);
    case Part::PlusPlus: return parts.window.plus_plus.at(k);
  }
  throw Error("part_image: bad part");
}

/// Symbolic parts when the model has them; otherwise intersections of g^{±i} U g^{∓i}
/// for i = 1, 2, ... until the level-K images of two successive horizons agree.
/// U_{--} = ∪_j g^{-j} U_- g^j and U_{++} = ∪_j g^j U_+ g^{-j} are increasing unions,
/// read off at the first j whose level-K image repeats.
template <class M>
UParts<M> u_parts(const M& model, const typename M::CompactOpen& u, const typename M::Element& g, int level,
                  int horizon = -1, std::uint64_t cap = kernel::kDefaultCap) {
  UParts<M> out{u, g, model.symbolic_parts(u, g), {}, level};
  if (out.symbolic) return out;
  if (horizon < 0) horizon = 2 * level + 8;
  auto plus = u, minus = u;
  auto prev_plus = model.image(plus, level, cap), prev_minus = model.image(minus, level, cap);
  int h = 1;
  for (; h <= horizon; ++h) {
    plus = model.intersect(plus, model.conjugate(u, model.pow(g, h)));
    minus = model.intersect(minus, model.conjugate(u, model.pow(g, -h)));
    auto ip = model.image(plus, level, cap), im = model.image(minus, level, cap);
    const bool same = ip == prev_plus && im == prev_minus;
    prev_plus = std::move(ip);
    prev_minus = std::move(im);
    if (same) {
      out.window.conclusive = true;
      break;
    }
  }
  out.window.horizon_used = std::min(h, horizon);
  const auto grow = [&](const typename M::CompactOpen& v, const typename M::Element& step) {
    auto cur = v;
    auto prev = model.image(cur, level, cap);
    for (int j = 1; j <= horizon; ++j) {
      auto next = model.conjugate(cur, step);
      auto img = model.image(next, level, cap);
      cur = std::move(next);
      if (img == prev) return std::make_pair(cur, true);
      prev = std::move(img);
    }
    return std::make_pair(cur, false);
  };
  const auto [mm, mm_ok] = grow(minus, model.inv(g));
  const auto [pp, pp_ok] = grow(plus, g);
  out.window.conclusive = out.window.conclusive && mm_ok && pp_ok;
  const auto zero = model.intersect(plus, minus);
  for (int k = 0; k <= level; ++k) {
    out.window.plus.push_back(model.image(plus, k, cap));
    out.window.minus.push_back(model.image(minus, k, cap));
    out.window.zero.push_back(model.image(zero, k, cap));
    out.window.minus_minus.push_back(model.image(mm, k, cap));
    out.window.plus_plus.push_back(model.image(pp, k, cap));
  }
  return out;
}

template <class Element>
struct TidyAbove {
  Verdict verdict = Verdict::Inconclusive;
  int failing_level = -1;
  std::optional<kernel::Code> witness;
  std::string witness_text;  ///< rendering of the witness residue
  std::string reason;
};

/// U = U_+ U_- tested on window images at every level k <= K.
template <class M>
TidyAbove<typename M::Element> is_tidy_above(const M& model, const typename M::CompactOpen& u,
                                             const typename M::Element& g, int level,
                                             std::uint64_t cap = kernel::kDefaultCap) {
  TidyAbove<typename M::Element> out;
  if (!model.within_reference(u)) {
    out.reason = "subgroup is not contained in the reference subgroup";
    return out;
  }
  const auto parts = u_parts(model, u, g, level, -1, cap);
  if (!parts.conclusive()) {
    out.reason = "window parts did not stabilize";
    return out;
  }
  for (int k = 0; k <= level; ++k) {
    const auto w = model.window(k);
    const auto check = kernel::product_set_equals(w, part_image(model, parts, Part::Plus, k, cap),
                                                  part_image(model, parts, Part::Minus, k, cap), model.image(u, k, cap));
    if (!check.equal) {
      out.verdict = Verdict::False;
      out.failing_level = k;
      out.witness = check.witness;
      if (check.witness) out.witness_text = w.format(*check.witness);
      out.reason = check.kind == kernel::ProductCheck::WitnessKind::MissingFromProduct ? "element of U missing from U_+U_-"
                                                                                       : "part image outside U";
      return out;
    }
  }
  out.verdict = Verdict::True;
  return out;
}

template <class M>
struct TidyProcedure {
  typename M::CompactOpen v;
  int k = 0;
  std::vector<TidyAbove<typename M::Element>> rejected;  ///< results for 0..k-1
};

/// V = ∩_{i=0}^{k} g^i U g^{-i} for the smallest k <= max_k that is tidy above at resolution K.
template <class M>
TidyProcedure<M> tidy_above_procedure(const M& model, const typename M::CompactOpen& u, const typename M::Element& g,
                                      int max_k = 10, int level = 3, std::uint64_t cap = kernel::kDefaultCap) {
  TidyProcedure<M> out{u, 0, {}};
  for (int k = 0; k <= max_k; ++k) {
    if (k > 0) out.v = model.intersect(out.v, model.conjugate(u, model.pow(g, k)));
    auto t = is_tidy_above(model, out.v, g, level, cap);
    if (t.verdict == Verdict::True) {
      out.k = k;
      return out;
    }
    out.rejected.push_back(std::move(t));
  }
  throw CapExceeded("tidy_above_procedure: no k <= " + std::to_string(max_k) + " gives a subgroup tidy above");
}

template <class Element>
struct TidyBelow {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Element> witness;
  int j = 0;
  std::string reason;
};

/// Tidiness below: closed symbolic U_{--} and U_{++} certify it; an element of
/// (g^j U_- g^{-j} ∩ U) \ U_- refutes it.
template <class M>
TidyBelow<typename M::Element> is_tidy_below(const M& model, const typename M::CompactOpen& u,
                                             const typename M::Element& g, int horizon = 20) {
  TidyBelow<typename M::Element> out;
  const auto symbolic = model.symbolic_parts(u, g);
  if (symbolic && model.is_closed(symbolic->minus_minus) && model.is_closed(symbolic->plus_plus)) {
    out.verdict = Verdict::True;
    out.reason = "U_-- and U_++ have closed symbolic form";
    return out;
  }
  if (auto w = model.below_witness(u, g, horizon)) {
    if (symbolic && (!model.contains(u, w->x) || !model.contains(symbolic->minus_minus, w->x) ||
                     model.contains(symbolic->minus, w->x)))
      throw CheckFailed("is_tidy_below: invalid witness " + model.format(w->x));
    out.verdict = Verdict::False;
    out.witness = w->x;
    out.j = w->j;
    out.reason = "element of U_-- ∩ U outside U_-";
    return out;
  }
  out.reason = "no certificate or witness within the horizon";
  return out;
}

template <class M>
struct TidyReport {
  TidyProcedure<M> procedure;
  TidyAbove<typename M::Element> above;
  TidyBelow<typename M::Element> below;
  int level = 0;
};

template <class M>
TidyReport<M> tidy_report(const M& model, const typename M::CompactOpen& u, const typename M::Element& g, int max_k,
                          int level, int horizon = 20, std::uint64_t cap = kernel::kDefaultCap) {
  auto proc = tidy_above_procedure(model, u, g, max_k, level, cap);
  auto above = is_tidy_above(model, proc.v, g, level, cap);
  auto below = is_tidy_below(model, proc.v, g, horizon);
  return TidyReport<M>{std::move(proc), std::move(above), std::move(below), level};
}

/// A subgroup tidy for g: the model's own candidate, else the procedure applied to B_j, j = 0..level.
template <class M>
std::optional<typename M::CompactOpen> find_tidy(const M& model, const typename M::Element& g, int max_k, int level,
                                                 std::uint64_t cap = kernel::kDefaultCap) {
  std::vector<typename M::CompactOpen> candidates;
  if (auto t = model.tidy_subgroup(g)) candidates.push_back(*t);
  for (int j = 0; j <= level; ++j) {
    try {
      candidates.push_back(tidy_above_procedure(model, model.filtration(j), g, max_k, level, cap).v);
    } catch (const CapExceeded&) {
    } catch (const UnsupportedElement&) {
    }
  }
  for (const auto& v : candidates) {
    if (is_tidy_above(model, v, g, level, cap).verdict == Verdict::True &&
        is_tidy_below(model, v, g).verdict == Verdict::True)
      return v;
  }
  return std::nullopt;
}

template <class M>
struct ScaleIndex {
  std::uint64_t value = 1;
  typename M::CompactOpen tidy;
};

/// [g U_+ g^{-1} : U_+] at a tidy U, evaluated inside the reference subgroup as
/// [image_K(U_+) : image_K(g^{-1} U_+ g)].
template <class M>
ScaleIndex<M> scale_index(const M& model, const typename M::Element& g, int level, int max_k = 10,
                          std::uint64_t cap = kernel::kDefaultCap) {
  auto tidy = find_tidy(model, g, max_k, level, cap);
  if (!tidy) throw CapExceeded("scale_index: no tidy subgroup found");
  const auto parts = u_parts(model, *tidy, g, level, -1, cap);
  kernel::SubgroupImage plus = part_image(model, parts, Part::Plus, level, cap), shrunk;
  if (parts.symbolic) {
    shrunk = model.image(model.conjugate(parts.symbolic->plus, model.inv(g)), level, cap);
  } else {
    const auto moved = u_parts(model, model.conjugate(*tidy, model.inv(g)), g, level, -1, cap);
    shrunk = part_image(model, moved, Part::Plus, level, cap);
  }
  return ScaleIndex<M>{kernel::index(plus, shrunk), *tidy};
}

}  // namespace tdlc::dynamics
