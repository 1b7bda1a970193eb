#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/error.hpp"

namespace tdlc::limits {

/// One induction step n -> n+1: c = u t_n b_{n,n} = w_- w_+, y = g^{-n} w_+^{-1} g^n,
/// t_{n+1} = t_n y.
template <class Element>
struct ConjugatorStep {
  int n = 0;
  Element c;
  Element w_minus;
  Element w_plus;
  Element y;
  Element t_next;
};

/// t with t^{-1}(gu)^k t = b_k g^k, b_k ∈ U, for 0 <= k <= N.
template <class M>
struct ConjugatorTrace {
  typename M::Element g;
  typename M::Element u;
  typename M::CompactOpen subgroup;
  std::vector<ConjugatorStep<typename M::Element>> steps;
  typename M::Element t;
  std::vector<typename M::Element> certificates;  ///< b_{N,k}, k = 0..N
};

template <class M>
struct ReplayResult {
  bool ok = true;
  int failing_k = 0;
  std::string detail;
};

/// Checks t^{-1}(gu)^k t g^{-k} = b_k ∈ U by exact multiplication for k = 0..N.
template <class M>
ReplayResult<M> replay(const M& model, const typename M::Element& g, const typename M::Element& u,
                       const typename M::CompactOpen& subgroup, const typename M::Element& t,
                       const std::vector<typename M::Element>& certificates) {
  const auto gu = model.mul(g, u);
  const auto tinv = model.inv(t);
  auto power = model.identity();   // (gu)^k
  auto gpow_inv = model.identity();  // g^{-k}
  const auto ginv = model.inv(g);
  for (std::size_t k = 0; k < certificates.size(); ++k) {
    const auto b = model.mul(model.mul(model.mul(tinv, power), t), gpow_inv);
    if (!(b == certificates[k]))
      return {false, static_cast<int>(k), "certificate differs from t^{-1}(gu)^k t g^{-k}"};
    if (!model.contains(subgroup, b)) return {false, static_cast<int>(k), "certificate " + model.format(b) + " not in U"};
    power = model.mul(power, gu);
    gpow_inv = model.mul(gpow_inv, ginv);
  }
  return {};
}

/// Inductive conjugator for a subgroup tidy above for g: t_N ∈ U_+ with the certificate
/// identity for k = 0..N. Each step factors u t_n b_{n,n} through the model's split.
template <class M>
ConjugatorTrace<M> conjugator_forward(const M& model, const typename M::Element& g, const typename M::Element& u,
                                      const typename M::CompactOpen& subgroup, int steps, int check_level = 2) {
  if (!model.contains(subgroup, u))
    throw ContainmentError("conjugator_forward: u = " + model.format(u) + " is not in " + model.format(subgroup));
  const auto tidy = dynamics::is_tidy_above(model, subgroup, g, check_level);
  if (tidy.verdict != Verdict::True)
    throw CheckFailed("conjugator_forward: " + model.format(subgroup) + " is not tidy above (" + tidy.reason + ")");
  ConjugatorTrace<M> tr{g, u, subgroup, {}, model.identity(), {model.identity()}};
  const auto ginv = model.inv(g);
  auto gn = model.identity(), gn_inv = model.identity();  // g^n, g^{-n}
  for (int n = 0; n < steps; ++n) {
    const auto c = model.mul(model.mul(u, tr.t), tr.certificates[static_cast<std::size_t>(n)]);
    const auto sp = model.split(subgroup, g, c);
    if (!sp) throw CheckFailed("conjugator_forward: step " + std::to_string(n) + ": " + sp.failure);
    const auto& [w_minus, w_plus] = *sp.split;
    const auto y = model.mul(model.mul(gn_inv, model.inv(w_plus)), gn);
    const auto yinv = model.inv(y);
    // b_{n+1,k} = y^{-1} b_{n,k} g^k y g^{-k}
    auto gk = model.identity(), gk_inv = model.identity();
    for (int k = 0; k <= n; ++k) {
      auto& b = tr.certificates[static_cast<std::size_t>(k)];
      b = model.mul(model.mul(model.mul(model.mul(yinv, b), gk), y), gk_inv);
      gk = model.mul(gk, g);
      gk_inv = model.mul(gk_inv, ginv);
    }
    // b_{n+1,n+1} = y^{-1} t_n^{-1} g w_- g^{-1}
    tr.certificates.push_back(model.mul(model.mul(model.mul(model.mul(yinv, model.inv(tr.t)), g), w_minus), ginv));
    const auto t_next = model.mul(tr.t, y);
    tr.steps.push_back({n, c, w_minus, w_plus, y, t_next});
    tr.t = t_next;
    gn = model.mul(gn, g);
    gn_inv = model.mul(gn_inv, ginv);
  }
  return tr;
}

template <class M>
struct Adjusted {
  typename M::Element t;  ///< t' = t v^{-1}
  typename M::Element v;  ///< v ∈ U_0
  bool adjusted = true;   ///< false when the model could not split t
};

/// t = t' v with v ∈ U_0, t' ∈ con(g^{-1}) ∩ U_+.
template <class M>
Adjusted<M> adjust_to_contraction(const M& model, const typename M::Element& t, const typename M::CompactOpen& subgroup,
                                  const typename M::Element& g) {
  try {
    const auto [tp, v] = model.contraction_split(subgroup, g, t);
    return {tp, v, true};
  } catch (const UnsupportedElement&) {
    return {t, model.identity(), false};
  }
}

/// Replaces the trace's t by t' = t v^{-1} and recomputes the certificates, which stay in U
/// because U_0 is normalized by g.
template <class M>
ConjugatorTrace<M> with_adjusted(const M& model, ConjugatorTrace<M> tr, const Adjusted<M>& adj) {
  const auto v = adj.v;
  const auto vinv = model.inv(v);
  const auto ginv = model.inv(tr.g);
  auto gk = model.identity(), gk_inv = model.identity();
  for (auto& b : tr.certificates) {
    // (t v^{-1})^{-1} (gu)^k (t v^{-1}) g^{-k} = v b_k g^k v^{-1} g^{-k}
    b = model.mul(model.mul(model.mul(model.mul(v, b), gk), vinv), gk_inv);
    gk = model.mul(gk, tr.g);
    gk_inv = model.mul(gk_inv, ginv);
  }
  tr.t = adj.t;
  return tr;
}

/// r with r^{-1}(gu)^k r = b_k g^k, b_k ∈ U, for -N <= k <= N.
template <class M>
struct TwoSidedTrace {
  ConjugatorTrace<M> forward;   ///< (g, u): t ∈ U_+
  ConjugatorTrace<M> backward;  ///< (g^{-1}, g u^{-1} g^{-1}): s ∈ U_-
  typename M::Element v_plus;
  typename M::Element v_minus;
  typename M::Element r;
  std::vector<typename M::Element> certificates;  ///< b_k for k = -N..N, index k + N
  int steps = 0;
};

template <class M>
TwoSidedTrace<M> conjugator_two_sided(const M& model, const typename M::Element& g, const typename M::Element& u,
                                      const typename M::CompactOpen& subgroup, int steps, int check_level = 2) {
  if (!model.contains(subgroup, u) || !model.contains(subgroup, model.conj(g, u)))
    throw ContainmentError("conjugator_two_sided: u = " + model.format(u) + " is not in U ∩ g^{-1}Ug");
  const auto ginv = model.inv(g);
  auto fwd = conjugator_forward(model, g, u, subgroup, steps, check_level);
  auto bwd = conjugator_forward(model, ginv, model.conj(g, model.inv(u)), subgroup, steps, check_level);
  const auto& t = fwd.t;
  const auto& s = bwd.t;
  // s^{-1} t = v_+ v_-; a split for g^{-1} returns (U_-(g^{-1}), U_+(g^{-1})) = (U_+, U_-) factors.
  const auto sp = model.split(subgroup, ginv, model.mul(model.inv(s), t));
  if (!sp) throw CheckFailed("conjugator_two_sided: " + sp.failure);
  const auto v_plus = sp.split->minus, v_minus = sp.split->plus;
  const auto r = model.mul(t, model.inv(v_minus));
  if (!(r == model.mul(s, v_plus))) throw CheckFailed("conjugator_two_sided: t v_-^{-1} != s v_+");
  TwoSidedTrace<M> out{std::move(fwd), std::move(bwd), v_plus, v_minus, r, {}, steps};
  const auto gu = model.mul(g, u);
  const auto rinv = model.inv(r);
  out.certificates.resize(static_cast<std::size_t>(2 * steps + 1));
  for (int sign : {1, -1}) {
    const auto step = sign > 0 ? gu : model.inv(gu);
    const auto gstep_inv = sign > 0 ? ginv : g;
    auto power = model.identity(), gpow_inv = model.identity();
    for (int k = 0; k <= steps; ++k) {
      out.certificates[static_cast<std::size_t>(sign * k + steps)] =
          model.mul(model.mul(model.mul(rinv, power), r), gpow_inv);
      power = model.mul(power, step);
      gpow_inv = model.mul(gpow_inv, gstep_inv);
    }
  }
  return out;
}

/// Checks every certificate of a two-sided trace lies in U, and the forward/backward traces replay.
template <class M>
ReplayResult<M> replay(const M& model, const TwoSidedTrace<M>& tr) {
  for (std::size_t i = 0; i < tr.certificates.size(); ++i)
    if (!model.contains(tr.forward.subgroup, tr.certificates[i]))
      return {false, static_cast<int>(i) - tr.steps, "certificate " + model.format(tr.certificates[i]) + " not in U"};
  const auto f = replay(model, tr.forward.g, tr.forward.u, tr.forward.subgroup, tr.forward.t, tr.forward.certificates);
  if (!f.ok) return f;
  const auto b = replay(model, tr.backward.g, tr.backward.u, tr.backward.subgroup, tr.backward.t, tr.backward.certificates);
  if (!b.ok) return {false, -b.failing_k, b.detail};
  return {};
}

}  // namespace tdlc::limits
