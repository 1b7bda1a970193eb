#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tdlc/cli/commands.hpp"
#include "tdlc/limits/chabauty.hpp"
#include "tdlc/limits/transport.hpp"
#include "tdlc/verify/anisotropy.hpp"
#include "tdlc/verify/structure.hpp"
#include "tdlc/verify/tits_core.hpp"
#include "tdlc/verify/witness.hpp"

namespace tdlc::cli {

/// Names accepted by `theorem-check --which`, in the order "all" runs them.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "tidy-above",   "tidy-structure", "nub-characterizations", "scale",        "conjugator",      "conjugator-two-sided",
      "transport",    "limits",         "quotient-anisotropy",   "normal-closure", "tits-core",      "chabauty-axioms"};
  return names;
}

struct CheckOptions {
  std::string b;  ///< explicit lamp sequence for normal-closure ("" = random battery)
};

namespace checks {

using linear::LinearModel;
using linear::QMatrix;
using linear::Rational;
using shift::ShiftModel;

inline constexpr bool is_linear(const LinearModel&) { return true; }
inline constexpr bool is_linear(const ShiftModel&) { return false; }

inline QMatrix diag(std::vector<Rational> d) { return QMatrix::diagonal(d); }

template <class M>
Row row_for(const std::string& name, const M& model, const RunConfig& cfg) {
  return base_row("check", name, model, cfg);
}

/// Battery elements used by the nub and chabauty checks.
inline std::vector<shift::ShiftElement> battery(const ShiftModel& a) {
  return {a.parse("shift:1"), a.parse("shift:-1"), a.parse("shift:2"),
          a.parse("lamp:0;shift:1"), a.identity(), a.parse("lamp:0,3")};
}

inline std::vector<QMatrix> battery(const LinearModel& b) {
  const int p = b.p();
  std::vector<QMatrix> out;
  if (b.n() != 2) {
    std::vector<Rational> d(static_cast<std::size_t>(b.n()), Rational(1));
    out.push_back(b.identity());
    for (int i = 0; i < b.n(); ++i) {
      auto e = d;
      e[static_cast<std::size_t>(i)] = p;
      out.push_back(diag(e));
    }
    return out;
  }
  const QMatrix h(2, {1, 1, 0, 1});
  const QMatrix c(2, {1, 0, p, 1});
  out = {diag({p, 1}), diag({1, p}), diag({p, Rational(1, p)}), b.identity(),
         h * diag({p, 1}) * h.inverse(), c * diag({1, p}) * c.inverse()};
  return out;
}

template <class M>
std::vector<Row> tidy_above(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  std::vector<Row> rows;
  if constexpr (std::is_same_v<M, LinearModel>) {
    if (model.n() != 2) return rows;
    const int level = cfg.resolution.value_or(2);
    const auto g = diag({model.p(), 1});
    const auto proc = dynamics::tidy_above_procedure(model, model.reference(), g, cfg.max_k, level);
    auto row = row_for("tidy-above", model, cfg);
    row["params"]["U"] = model.format(model.reference());
    row["params"]["g"] = model.format(g);
    row["k"] = proc.k;
    row["tidy"] = model.format(proc.v);
    const bool iwahori = model.image(proc.v, level) == model.image(model.iwahori(), level);
    const bool witnessed = !proc.rejected.empty() && proc.rejected[0].witness.has_value();
    if (witnessed)
      row["witness"] = Row{{"failing_level", proc.rejected[0].failing_level}, {"residue", proc.rejected[0].witness_text}};
    row["pass"] = proc.k == 1 && iwahori && witnessed;
    rows.push_back(row);
  } else {
    const auto g = model.parse("shift:1");
    for (int k = 0; k <= 3; ++k) {
      const auto u = model.filtration(k);
      const auto above = dynamics::is_tidy_above(model, u, g, cfg.resolution.value_or(3));
      const auto below = dynamics::is_tidy_below(model, u, g, cfg.horizon.value_or(20));
      auto row = row_for("tidy-above", model, cfg);
      row["params"]["U"] = model.format(u);
      row["params"]["g"] = model.format(g);
      row["tidy_above"] = to_string(above.verdict);
      row["tidy_below"] = to_string(below.verdict);
      if (below.witness) row["witness"] = Row{{"x", model.format(*below.witness)}, {"j", below.j}};
      row["pass"] = above.verdict == Verdict::True && below.verdict == Verdict::False && below.witness.has_value();
      rows.push_back(row);
    }
  }
  return rows;
}

template <class M>
std::vector<Row> tidy_structure(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  std::vector<Row> rows;
  const bool lin = is_linear(model);
  const int level = cfg.resolution.value_or(lin && model.p() > 2 ? 2 : 4);
  for (const auto& g : battery(model)) {
    std::vector<std::pair<typename M::CompactOpen, bool>> subgroups;
    if constexpr (std::is_same_v<M, LinearModel>) {
      // The Iwahori shape is only comparable with parts computed in the standard basis.
      if (model.n() == 2 && g.is_diagonal()) subgroups.emplace_back(model.iwahori(), false);
      subgroups.emplace_back(model.filtration(1), false);
    } else {
      for (int k = 1; k <= 3; ++k)
        if (std::abs(g.shift) <= 2 * k + 1) subgroups.emplace_back(model.filtration(k), false);
    }
    if (auto t = model.tidy_subgroup(g)) subgroups.emplace_back(*t, true);
    for (const auto& [u, tidy] : subgroups) {
      auto row = row_for("tidy-structure", model, cfg);
      row["params"]["resolution"] = level;
      row["params"]["g"] = model.format(g);
      row["params"]["U"] = model.format(u);
      try {
        const auto rep = verify::structure_identities(model, u, g, level, tidy);
        Row ids = Row::object();
        for (const auto& c : rep.checks) ids[c.name] = c.holds;
        row["identities"] = ids;
        row["pass"] = rep.pass();
      } catch (const Error& e) {
        row["error"] = e.what();
        row["pass"] = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

template <class M>
std::vector<Row> nub_characterizations(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  std::vector<Row> rows;
  const int level = cfg.resolution.value_or(is_linear(model) ? 2 : 3);
  for (const auto& g : battery(model)) {
    auto row = nub_row(model, cfg, g, level, "check", "nub-characterizations");
    if (row["pass"].template get<bool>()) {
      // Linear nubs are trivial; the shift has full nub for a nonzero shift and trivial otherwise.
      std::uint64_t expected = 1;
      if constexpr (std::is_same_v<M, ShiftModel>)
        if (g.shift != 0) expected = model.window(level).order();
      row["expected_size"] = expected;
      row["pass"] = row["nub_size"].template get<std::uint64_t>() == expected;
    }
    rows.push_back(row);
  }
  return rows;
}

template <class M>
std::vector<Row> scale(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  std::vector<Row> rows;
  const auto add = [&](const auto& mdl, const auto& g, std::uint64_t expected, int level) {
    auto row = row_for("scale", mdl, cfg);
    row["params"]["resolution"] = level;
    row["params"]["g"] = mdl.format(g);
    const auto idx = dynamics::scale_index(mdl, g, level, cfg.max_k);
    const auto formula = mdl.scale_formula(g);
    row["scale"] = idx.value;
    row["formula"] = formula;
    row["expected"] = expected;
    row["tidy"] = mdl.format(idx.tidy);
    row["pass"] = idx.value == formula && formula == expected;
    rows.push_back(row);
  };
  if constexpr (std::is_same_v<M, LinearModel>) {
    const std::uint64_t p = static_cast<std::uint64_t>(model.p());
    const int level = cfg.resolution.value_or(2);
    const LinearModel b(model.p(), 2);
    const QMatrix h(2, {1, Rational(1, model.p()), 0, 1});
    add(b, diag({model.p(), 1}), p, level);
    add(b, diag({model.p(), Rational(1, model.p())}), p * p, level);
    add(b, b.identity(), 1, level);
    add(b, h * diag({model.p(), 1}) * h.inverse(), p, level);
    if (model.p() == 2) {
      const LinearModel b3(2, 3);
      add(b3, diag({4, 2, 1}), 16, 2);
    }
  } else {
    const int level = cfg.resolution.value_or(3);
    for (const char* g : {"shift:1", "shift:-2", "lamp:0;shift:1", "lamp:0,2"}) add(model, model.parse(g), 1, level);
  }
  return rows;
}

template <class M>
std::pair<typename M::Element, typename M::CompactOpen> forward_setup(const M& model) {
  if constexpr (std::is_same_v<M, LinearModel>) {
    std::vector<Rational> d(static_cast<std::size_t>(model.n()), Rational(1));
    d[0] = model.p();
    return {diag(d), model.n() == 2 ? model.iwahori() : model.filtration(1)};
  } else {
    return {model.parse("shift:1"), model.filtration(1)};
  }
}

template <class M>
std::vector<Row> conjugator(const M& model, const RunConfig& cfg, std::mt19937_64& rng) {
  const int steps = cfg.horizon.value_or(12);
  const auto [g, U] = forward_setup(model);
  auto row = row_for("conjugator", model, cfg);
  row["params"]["horizon"] = steps;
  row["params"]["g"] = model.format(g);
  row["params"]["U"] = model.format(U);
  const int count = 10;
  int ok = 0;
  Row failures = Row::array();
  for (int i = 0; i < count; ++i) {
    const auto u = model.random_in(U, rng);
    const auto tr = limits::conjugator_forward(model, g, u, U, steps);
    const auto rep = limits::replay(model, g, u, U, tr.t, tr.certificates);
    if (rep.ok)
      ++ok;
    else
      failures.push_back(Row{{"u", model.format(u)}, {"failing_k", rep.failing_k}});
  }
  row["pairs"] = count;
  row["replayed"] = ok;
  if (!failures.empty()) row["witness"] = failures;
  row["pass"] = ok == count;
  return {row};
}

template <class M>
std::vector<Row> conjugator_two_sided(const M& model, const RunConfig& cfg, std::mt19937_64& rng) {
  const int steps = cfg.horizon.value_or(is_linear(model) ? 8 : 10);
  auto [g, U] = forward_setup(model);
  if constexpr (std::is_same_v<M, ShiftModel>) U = model.filtration(2);
  const auto domain = model.intersect(U, model.conjugate(U, model.inv(g)));
  auto row = row_for("conjugator-two-sided", model, cfg);
  row["params"]["horizon"] = steps;
  row["params"]["g"] = model.format(g);
  row["params"]["U"] = model.format(U);
  const int count = 10;
  int ok = 0;
  Row failures = Row::array();
  for (int i = 0; i < count; ++i) {
    const auto u = model.random_in(domain, rng);
    const auto tr = limits::conjugator_two_sided(model, g, u, U, steps);
    const auto rep = limits::replay(model, tr);
    if (rep.ok)
      ++ok;
    else
      failures.push_back(Row{{"u", model.format(u)}, {"failing_k", rep.failing_k}});
  }
  row["pairs"] = count;
  row["replayed"] = ok;
  if (!failures.empty()) row["witness"] = failures;
  row["pass"] = ok == count;
  return {row};
}

/// Perturbation in U (or in U ∩ g^{-1}Ug for the two-sided case). Linear perturbations are
/// lower triangular so that gu stays triangular with rational eigenvalues.
template <class M>
typename M::Element transport_perturbation(const M& model, const typename M::CompactOpen& domain, std::mt19937_64& rng,
                                           bool two_sided) {
  if constexpr (std::is_same_v<M, LinearModel>) {
    const int p = model.p();
    std::uniform_int_distribution<int> unit(1, p - 1), any(-9, 9);
    QMatrix u = model.identity();
    for (int r = 0; r < model.n(); ++r) {
      u(r, r) = unit(rng);
      for (int c = 0; c < r; ++c) u(r, c) = linear::ppow(p, two_sided ? 2 : 1) * any(rng);
    }
    if (!model.contains(domain, u)) throw Error("transport_perturbation: sample left the domain");
    return u;
  } else {
    return model.random_in(domain, rng);
  }
}

template <class M>
std::vector<Row> transport(const M& model, const RunConfig& cfg, std::mt19937_64& rng) {
  std::vector<Row> rows;
  auto [g, U] = forward_setup(model);
  {
    auto row = row_for("transport", model, cfg);
    row["params"]["kind"] = "con";
    row["params"]["samples"] = cfg.samples;
    const auto u = transport_perturbation(model, U, rng, false);
    row["params"]["u"] = model.format(u);
    try {
      const auto tr = limits::conjugator_forward(model, g, u, U, 16);
      const auto t = limits::adjust_to_contraction(model, tr.t, U, g).t;
      const auto rep = limits::con_transport_check(model, g, u, t, cfg.samples, rng);
      row["forward_checked"] = rep.forward_checked;
      row["backward_checked"] = rep.backward_checked;
      row["inconclusive"] = rep.inconclusive;
      if (!rep.note.empty()) row["note"] = rep.note;
      row["pass"] = true;
    } catch (const CheckFailed& e) {
      row["witness"] = e.what();
      row["pass"] = false;
    }
    rows.push_back(row);
  }
  {
    if constexpr (std::is_same_v<M, ShiftModel>) U = model.filtration(2);
    // Level 3 keeps the Iwahori image under the enumeration cap only for p = 2.
    const int level = is_linear(model) && model.p() > 2 ? 2 : 3;
    const auto domain = model.intersect(U, model.conjugate(U, model.inv(g)));
    const auto u = transport_perturbation(model, domain, rng, true);
    auto row = row_for("transport", model, cfg);
    row["params"]["kind"] = "nub";
    row["params"]["resolution"] = level;
    row["params"]["u"] = model.format(u);
    try {
      const auto tr = limits::conjugator_two_sided(model, g, u, U, is_linear(model) ? 8 : 10);
      const auto rep = limits::nub_transport_check(model, g, u, tr.r, level);
      row["nub_size"] = rep.target.size();
      row["pass"] = true;
    } catch (const CheckFailed& e) {
      row["witness"] = e.what();
      row["pass"] = false;
    }
    rows.push_back(row);
  }
  return rows;
}

template <class M>
std::vector<Row> limits(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  limits::NetReport rep;
  RunConfig c = cfg;
  c.resolution = limits_level(model, cfg);
  const auto rows = limits_rows(model, c, 8, false, &rep);
  auto row = row_for("limits", model, cfg);
  row["params"]["resolution"] = *c.resolution;
  row["params"]["count"] = 8;
  row["rows"] = rows.size();
  row["c"] = rep.c;
  row["monotone"] = rep.monotone;
  row["reached"] = rep.reached;
  row["pass"] = rep.pass && all_pass(rows);
  return {row};
}

inline std::vector<Row> quotient_anisotropy(const ShiftModel& model, const RunConfig& cfg, std::mt19937_64& rng) {
  std::vector<Row> rows;
  const std::vector<std::pair<std::string, std::vector<shift::ShiftElement>>> schedules{
      {"hyperbolic", {model.parse("shift:1"), model.parse("lamp:0;shift:1"), model.parse("shift:-2")}},
      {"elliptic", {model.identity(), model.parse("lamp:0,3")}}};
  for (auto kind : {verify::NormalKind::LampSubgroup, verify::NormalKind::Trivial}) {
    for (const auto& [name, schedule] : schedules) {
      auto row = row_for("quotient-anisotropy", model, cfg);
      row["params"]["N"] = verify::to_string(kind);
      row["params"]["schedule"] = name;
      bool pass = true;
      Row levels = Row::array();
      for (int k = 0; k <= cfg.resolution.value_or(4); ++k) {
        const auto rep = verify::quotient_anisotropy_check({model, kind}, schedule, k, rng);
        levels.push_back(Row{{"level", k},
                             {"core_in_normal", rep.core_in_normal},
                             {"quotient_anisotropic", rep.quotient_anisotropic},
                             {"pass", rep.pass}});
        pass = pass && rep.pass;
      }
      row["levels"] = levels;
      row["pass"] = pass;
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::vector<Row> normal_closure(const ShiftModel& model, const RunConfig& cfg, std::mt19937_64& rng,
                                       const CheckOptions& opts) {
  std::vector<Row> rows;
  const auto emit = [&](const shift::EPSeq& b) {
    auto row = row_for("normal-closure", model, cfg);
    const auto be = shift::ShiftElement::lamp_only(b);
    row["params"]["b"] = model.format(be);
    const auto w = verify::normal_closure_witness(b);
    row["witness"] = Row{{"a", model.format(shift::ShiftElement::lamp_only(w.a))}, {"replay", w.replay}};
    row["pass"] = w.replay;
    rows.push_back(row);
  };
  if (!opts.b.empty()) {
    emit(model.parse(opts.b).lamp);
    return rows;
  }
  emit(shift::EPSeq::delta(model.p(), 0));
  auto row = row_for("normal-closure", model, cfg);
  std::uniform_int_distribution<int> pos(-10, 10), digit(0, model.p() - 1), count(0, 8);
  int ok = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    std::vector<std::pair<shift::Pos, int>> terms;
    for (int j = count(rng); j > 0; --j) terms.emplace_back(pos(rng), digit(rng));
    if (verify::normal_closure_witness(shift::EPSeq::from_support(model.p(), terms)).replay) ++ok;
  }
  row["params"]["random"] = total;
  row["replayed"] = ok;
  row["pass"] = ok == total;
  rows.push_back(row);
  return rows;
}

template <class M>
std::vector<Row> tits_core(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  std::vector<Row> rows;
  if constexpr (std::is_same_v<M, LinearModel>) {
    if (model.n() != 2) return rows;
    const int p = model.p();
    const auto img = verify::tits_core_image(model, 1, {diag({p, 1}), diag({1, p})});
    const auto w = model.window(1);
    std::size_t sl = 0;
    bool contains = true;
    for (auto c : w.all_elements()) {
      if (w.determinant(w.decode(c)) % p != 1 % p) continue;
      ++sl;
      contains = contains && img.image.contains(c);
    }
    auto row = row_for("tits-core", model, cfg);
    row["params"]["resolution"] = 1;
    row["image_size"] = img.image.size();
    row["sl2_size"] = sl;
    row["pass"] = contains && std::is_sorted(img.sizes.begin(), img.sizes.end());
    rows.push_back(row);
  } else {
    for (int k = 0; k <= cfg.resolution.value_or(4); ++k) {
      const auto img = verify::tits_core_image(model, k, {model.parse("shift:1"), model.parse("shift:-1")});
      auto row = row_for("tits-core", model, cfg);
      row["params"]["resolution"] = k;
      row["image_size"] = img.image.size();
      row["window_order"] = model.window(k).order();
      row["pass"] = img.image.size() == model.window(k).order() && std::is_sorted(img.sizes.begin(), img.sizes.end());
      rows.push_back(row);
    }
  }
  auto empty = row_for("tits-core", model, cfg);
  empty["params"]["schedule"] = "empty";
  empty["image_size"] = verify::tits_core_image(model, 2, {}).image.size();
  empty["pass"] = empty["image_size"] == 1;
  rows.push_back(empty);
  return rows;
}

template <class M>
std::vector<limits::ClosedSubgroupApprox> chabauty_battery(const M& model, int level) {
  std::vector<limits::ClosedSubgroupApprox> xs;
  if constexpr (std::is_same_v<M, LinearModel>) {
    for (int k = 0; k <= 2; ++k) xs.push_back(limits::approximate(model, model.filtration(k), level));
    if (model.n() == 2) xs.push_back(limits::approximate(model, model.iwahori(), level));
  } else {
    for (int k = 0; k <= 3; ++k) xs.push_back(limits::approximate(model, *model.filtration(k).as_lamp_set(), level));
    xs.push_back(limits::approximate(model, shift::LampSet::trivial(model.p()), level));
  }
  for (const auto& g : battery(model)) {
    try {
      xs.push_back(limits::approximate(model, model.closure(model.con_set(g)), level));
    } catch (const UnsupportedElement&) {
    }
  }
  return xs;
}

template <class M>
std::vector<Row> chabauty_axioms(const M& model, const RunConfig& cfg, std::mt19937_64&) {
  const int level = cfg.resolution.value_or(is_linear(model) ? 2 : 3);
  const auto xs = chabauty_battery(model, level);
  int violations = 0;
  bool coherent = true;
  for (const auto& x : xs) {
    coherent = coherent && limits::is_coherent(model, x);
    for (const auto& y : xs) {
      const auto dxy = limits::chabauty_distance(x, y);
      if (!(dxy == limits::chabauty_distance(y, x))) ++violations;
      if (dxy.indistinguishable() != (x.images == y.images)) ++violations;
      for (const auto& z : xs)
        if (limits::chabauty_distance(x, z).exponent() <
            std::min(dxy.exponent(), limits::chabauty_distance(y, z).exponent()))
          ++violations;
    }
  }
  auto row = row_for("chabauty-axioms", model, cfg);
  row["params"]["resolution"] = level;
  row["battery"] = xs.size();
  row["violations"] = violations;
  row["coherent"] = coherent;
  row["pass"] = violations == 0 && coherent;
  return {row};
}

template <class M>
std::vector<Row> dispatch(const std::string& name, const M& model, const RunConfig& cfg, std::mt19937_64& rng,
                          const CheckOptions& opts) {
  if (name == "tidy-above") return tidy_above(model, cfg, rng);
  if (name == "tidy-structure") return tidy_structure(model, cfg, rng);
  if (name == "nub-characterizations") return nub_characterizations(model, cfg, rng);
  if (name == "scale") return scale(model, cfg, rng);
  if (name == "conjugator") return conjugator(model, cfg, rng);
  if (name == "conjugator-two-sided") return conjugator_two_sided(model, cfg, rng);
  if (name == "transport") return transport(model, cfg, rng);
  if (name == "limits") return limits(model, cfg, rng);
  if (name == "tits-core") return tits_core(model, cfg, rng);
  if (name == "chabauty-axioms") return chabauty_axioms(model, cfg, rng);
  if constexpr (std::is_same_v<M, ShiftModel>) {
    if (name == "quotient-anisotropy") return quotient_anisotropy(model, cfg, rng);
    if (name == "normal-closure") return normal_closure(model, cfg, rng, opts);
  }
  return {};  // not applicable to this model
}

}  // namespace checks

/// Runs the named check (or every check for "all") on the configured model, or on both
/// models when none is configured. Each (check, model) pair draws its own seed from a
/// single generator, in a fixed order.
inline std::vector<Row> cmd_theorem_check(const RunConfig& cfg, const std::string& which,
                                          const CheckOptions& opts = {}) {
  std::vector<std::string> names;
  if (which == "all") {
    names = check_names();
  } else if (std::find(check_names().begin(), check_names().end(), which) != check_names().end()) {
    names = {which};
  } else {
    std::string valid;
    for (const auto& n : check_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw Error("theorem-check: unknown check '" + which + "'; valid names: all, " + valid);
  }
  std::vector<std::string> models;
  if (cfg.model)
    models = {*cfg.model};
  else
    models = {"shift", "linear"};
  std::mt19937_64 master(cfg.seed);
  std::vector<Row> rows;
  for (const auto& name : names) {
    for (const auto& m : models) {
      std::mt19937_64 rng(master());
      RunConfig c = cfg;
      c.model = m;
      std::vector<Row> part;
      try {
        part = with_model(c, m, [&](const auto& model) { return checks::dispatch(name, model, c, rng, opts); });
      } catch (const Error& e) {
        Row r;
        r["check"] = name;
        r["model"] = m;
        r["error"] = e.what();
        r["pass"] = false;
        part = {r};
      }
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  return rows;
}

}  // namespace tdlc::cli
