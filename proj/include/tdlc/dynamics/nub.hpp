#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/error.hpp"
#include "tdlc/kernel/window.hpp"

namespace tdlc::dynamics {

/// One route to the nub, evaluated as a window image.
struct NubRoute {
  std::string name;
  std::optional<kernel::SubgroupImage> image;  ///< empty when the route is unavailable
  std::string note;
  bool checked = true;  ///< participates in the agreement check
};

struct NubReport {
  kernel::SubgroupImage image;
  std::vector<NubRoute> routes;
  int level = 0;

  bool all_agree() const {
    for (const auto& r : routes)
      if (r.checked && r.image && !(*r.image == image)) return false;
    return true;
  }
};

namespace detail {

template <class M>
NubRoute closed_route(const std::string& name, const std::function<typename M::Closed()>& build, const M& model,
                      int level, std::uint64_t cap) {
  NubRoute r{name, std::nullopt, "", true};
  try {
    r.image = model.image(build(), level, cap);
  } catch (const UnsupportedElement& e) {
    r.note = e.what();
  }
  return r;
}

}  // namespace detail

/// Window image at level K of the nub of g, computed along five independent routes:
///   con-closures:   closure(con g) ∩ closure(con g^{-1})
///   bco-closure:    closure(con g ∩ par g^{-1})
///   con-par:        closure(con g) ∩ par g^{-1}
///   rbco:           ∩_{k<=K} closure(rbco(g, B_k))
///   tidy:           ∩ g^j V g^{-j} over |j| <= J and tidy V found from B_0..B_K
/// plus a sampled route (closure of projected con samples), reported but not checked.
/// Throws Disagreement when two checked routes differ.
template <class M>
NubReport nub_compute(const M& model, const typename M::Element& g, int level, int conj_range, int max_k = 10,
                      std::uint64_t seed = 1, std::uint64_t cap = kernel::kDefaultCap) {
  using Closed = typename M::Closed;
  const auto ginv = model.inv(g);
  NubReport out;
  out.level = level;

  out.routes.push_back(detail::closed_route<M>(
      "con-closures",
      [&]() -> Closed { return model.intersect(model.closure(model.con_set(g)), model.closure(model.con_set(ginv))); },
      model, level, cap));
  out.routes.push_back(detail::closed_route<M>(
      "bco-closure", [&]() -> Closed { return model.closure(model.intersect(model.con_set(g), model.par_set(ginv))); },
      model, level, cap));
  out.routes.push_back(detail::closed_route<M>(
      "con-par", [&]() -> Closed { return model.intersect(model.closure(model.con_set(g)), model.par_set(ginv)); },
      model, level, cap));

  {
    NubRoute r{"rbco", std::nullopt, "", true};
    try {
      auto acc = model.image(model.closure(model.rbco_set(g, 0)), level, cap);
      for (int k = 1; k <= level; ++k) acc = kernel::intersect(acc, model.image(model.closure(model.rbco_set(g, k)), level, cap));
      r.image = std::move(acc);
    } catch (const UnsupportedElement& e) {
      r.note = e.what();
    }
    out.routes.push_back(std::move(r));
  }

  {
    NubRoute r{"tidy", std::nullopt, "", true};
    std::vector<typename M::CompactOpen> tidy;
    for (int j = 0; j <= level; ++j) {
      if (auto t = model.tidy_subgroup(g, j);
          t && is_tidy_above(model, *t, g, level, cap).verdict == Verdict::True &&
          is_tidy_below(model, *t, g).verdict == Verdict::True)
        tidy.push_back(*t);
      try {
        auto v = tidy_above_procedure(model, model.filtration(j), g, max_k, level, cap).v;
        if (is_tidy_below(model, v, g).verdict == Verdict::True) tidy.push_back(std::move(v));
      } catch (const CapExceeded&) {
      } catch (const UnsupportedElement&) {
      }
    }
    std::optional<kernel::SubgroupImage> acc;
    for (const auto& v : tidy) {
      std::optional<typename M::CompactOpen> meet = v;
      for (int j = -conj_range; j <= conj_range && meet; ++j) {
        if (j == 0) continue;
        try {
          meet = model.intersect(*meet, model.conjugate(v, model.pow(g, j)));
        } catch (const UnsupportedElement&) {
          meet.reset();
        }
      }
      if (!meet) continue;  // conjugates not expressible in one basis
      const auto img = model.image(*meet, level, cap);
      acc = acc ? kernel::intersect(*acc, img) : img;
    }
    if (acc) {
      r.image = std::move(acc);
    } else {
      r.note = "no tidy subgroup found";
    }
    out.routes.push_back(std::move(r));
  }

  {
    NubRoute r{"sampled", std::nullopt, "", false};
    try {
      std::mt19937_64 rng(seed);
      const auto w = model.window(level);
      std::vector<kernel::Code> fwd, bwd;
      for (const auto& x : model.con_samples(g, 64, rng))
        if (model.in_reference(x)) fwd.push_back(model.project(x, level));
      for (const auto& x : model.con_samples(ginv, 64, rng))
        if (model.in_reference(x)) bwd.push_back(model.project(x, level));
      r.image = kernel::intersect(kernel::subgroup_closure(w, std::span<const kernel::Code>(fwd), cap),
                                  kernel::subgroup_closure(w, std::span<const kernel::Code>(bwd), cap));
      r.note = "64 samples per side; finite-resolution images of con sets may overlap beyond the nub";
    } catch (const Error& e) {
      r.note = e.what();
    }
    out.routes.push_back(std::move(r));
  }

  const NubRoute* first = nullptr;
  for (const auto& r : out.routes) {
    if (!r.checked || !r.image) continue;
    if (!first) {
      first = &r;
      out.image = *r.image;
    } else if (!(*r.image == *first->image)) {
      throw Disagreement("nub_compute: route " + first->name + " gives " + std::to_string(first->image->size()) +
                         " elements, route " + r.name + " gives " + std::to_string(r.image->size()));
    }
  }
  if (!first) throw UnsupportedElement("nub_compute: no route available for " + model.format(g));
  return out;
}

}  // namespace tdlc::dynamics
