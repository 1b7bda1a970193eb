// Acceptance run: one PASS/FAIL line per criterion; exit status 0 iff every line passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tdlc/dynamics/nub.hpp"
#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/kernel/lamp_window.hpp"
#include "tdlc/kernel/matrix_window.hpp"
#include "tdlc/limits/chabauty.hpp"
#include "tdlc/limits/conjugator.hpp"
#include "tdlc/limits/experiment.hpp"
#include "tdlc/limits/transport.hpp"
#include "tdlc/linear/model.hpp"
#include "tdlc/shift/model.hpp"
#include "tdlc/verify/anisotropy.hpp"
#include "tdlc/verify/structure.hpp"
#include "tdlc/verify/witness.hpp"

#ifndef TDLC_CLI_PATH
#define TDLC_CLI_PATH "tdlc_cli"
#endif

using namespace tdlc;

namespace {

using linear::LinearModel;
using linear::QMatrix;
using linear::Rational;
using shift::ShiftModel;

struct Outcome {
  bool pass = true;
  std::string detail;
};

QMatrix diag(std::vector<Rational> d) { return QMatrix::diagonal(d); }

// t^{-1}(gu)^k t g^{-k} ∈ U for k in [from, to], recomputed from powers.
template <class M>
bool naive_replay(const M& model, const typename M::Element& g, const typename M::Element& u,
                  const typename M::CompactOpen& U, const typename M::Element& t, int from, int to) {
  const auto gu = model.mul(g, u);
  for (int k = from; k <= to; ++k)
    if (!model.contains(U, model.mul(model.mul(model.mul(model.inv(t), model.pow(gu, k)), t), model.pow(g, -k))))
      return false;
  return true;
}

// t ∈ U_+ from the definition: g^{-k} t g^k ∈ U for k = 0..horizon.
template <class M>
bool forward_orbit_in(const M& model, const typename M::CompactOpen& U, const typename M::Element& g,
                      const typename M::Element& t, int horizon) {
  for (int k = 0; k <= horizon; ++k)
    if (!model.contains(U, model.mul(model.mul(model.pow(g, -k), t), model.pow(g, k)))) return false;
  return true;
}

Outcome forward_replay() {
  Outcome out;
  std::mt19937_64 rng(20240601);
  int pairs = 0;
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto g = diag({p, 1});
    for (int i = 0; i < 100; ++i, ++pairs) {
      const auto u = b.random_in(b.iwahori(), rng);
      const auto tr = limits::conjugator_forward(b, g, u, b.iwahori(), 20);
      if (!limits::replay(b, g, u, b.iwahori(), tr.t, tr.certificates).ok || !naive_replay(b, g, u, b.iwahori(), tr.t, 0, 20))
        return {false, "linear p=" + std::to_string(p) + " u=" + b.format(u)};
    }
  }
  ShiftModel a(2);
  const auto g = a.parse("shift:1");
  for (int i = 0; i < 100; ++i, ++pairs) {
    const auto u = a.random_in(a.filtration(1), rng);
    const auto tr = limits::conjugator_forward(a, g, u, a.filtration(1), 20);
    if (!limits::replay(a, g, u, a.filtration(1), tr.t, tr.certificates).ok ||
        !naive_replay(a, g, u, a.filtration(1), tr.t, 0, 20))
      return {false, "shift u=" + a.format(u)};
  }
  out.detail = std::to_string(pairs) + " pairs, k <= 20";
  return out;
}

Outcome two_sided_replay() {
  std::mt19937_64 rng(7);
  int pairs = 0;
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto g = diag({p, 1});
    const auto U = b.iwahori();
    const auto domain = b.intersect(U, b.conjugate(U, b.inv(g)));
    for (int i = 0; i < 50; ++i, ++pairs) {
      const auto u = b.random_in(domain, rng);
      const auto tr = limits::conjugator_two_sided(b, g, u, U, 10);
      if (!limits::replay(b, tr).ok || !naive_replay(b, g, u, U, tr.r, -10, 10))
        return {false, "linear p=" + std::to_string(p) + " u=" + b.format(u)};
    }
  }
  ShiftModel a(2);
  const auto g = a.parse("shift:1");
  const auto U = a.filtration(2);
  const auto domain = a.intersect(U, a.conjugate(U, a.inv(g)));
  for (int i = 0; i < 50; ++i, ++pairs) {
    const auto u = a.random_in(domain, rng);
    const auto tr = limits::conjugator_two_sided(a, g, u, U, 10);
    if (!limits::replay(a, tr).ok || !naive_replay(a, g, u, U, tr.r, -10, 10)) return {false, "shift u=" + a.format(u)};
  }
  return {true, std::to_string(pairs) + " pairs, |k| <= 10"};
}

Outcome transport() {
  std::mt19937_64 rng(3);
  int con_checked = 0, inconclusive = 0, nub_checked = 0;
  // Linear battery: lower triangular perturbations keep gu triangular.
  LinearModel b(2);
  const auto gl = diag({2, 1});
  const std::vector<QMatrix> lin_u{QMatrix(2, {1, 0, 2, 1}), QMatrix(2, {1, 0, -6, 1}), QMatrix(2, {1, 0, 4, 1}),
                                   QMatrix(2, {1, 0, 12, 1}), QMatrix(2, {1, 0, 8, 1})};
  for (const auto& u : lin_u) {
    const auto tr = limits::conjugator_forward(b, gl, u, b.iwahori(), 16);
    const auto t = limits::adjust_to_contraction(b, tr.t, b.iwahori(), gl).t;
    const auto rep = limits::con_transport_check(b, gl, u, t, 50, rng);
    con_checked += rep.forward_checked + rep.backward_checked;
    inconclusive += rep.inconclusive;
    if (b.contains(b.intersect(b.iwahori(), b.conjugate(b.iwahori(), b.inv(gl))), u)) {
      const auto two = limits::conjugator_two_sided(b, gl, u, b.iwahori(), 10);
      limits::nub_transport_check(b, gl, u, two.r, 3);
      ++nub_checked;
    }
  }
  ShiftModel a(2);
  const auto gs = a.parse("shift:1");
  for (const char* us : {"lamp:3", "lamp:-3", "lamp:2,5", "lamp:-4,4", "lamp:3,4,7"}) {
    const auto u = a.parse(us);
    const auto tr = limits::conjugator_forward(a, gs, u, a.filtration(1), 16);
    const auto rep = limits::con_transport_check(a, gs, u, tr.t, 50, rng);
    con_checked += rep.forward_checked + rep.backward_checked;
    inconclusive += rep.inconclusive;
    if (a.contains(a.intersect(a.filtration(2), a.conjugate(a.filtration(2), a.inv(gs))), u)) {
      const auto two = limits::conjugator_two_sided(a, gs, u, a.filtration(2), 10);
      limits::nub_transport_check(a, gs, u, two.r, 3);
      ++nub_checked;
    }
  }
  return {inconclusive == 0, std::to_string(con_checked) + " con samples checked, " + std::to_string(inconclusive) +
                                 " inconclusive, " + std::to_string(nub_checked) + " nub transports at K=3"};
}

template <class M>
Outcome net_levels(const M& model, const std::string& label) {
  const auto schedule = limits::default_schedule(model, 8);
  const auto rep = limits::net_experiment(model, schedule, 6);
  if (rep.rows.size() != 8) return {false, label + ": wrong row count"};
  for (int n = 1; n <= 8; ++n) {
    const auto& un = schedule.chain[static_cast<std::size_t>(n)];
    const auto& u = schedule.perturbations[static_cast<std::size_t>(n - 1)];
    auto tr = limits::conjugator_forward(model, schedule.g, u, un, 12);
    const auto t = limits::adjust_to_contraction(model, tr.t, un, schedule.g).t;
    const auto parts = model.symbolic_parts(un, schedule.g);
    if (parts && !model.contains(parts->plus, t)) return {false, label + ": t_n not in (U_n)_+ at n=" + std::to_string(n)};
    if (!forward_orbit_in(model, un, schedule.g, t, 20))
      return {false, label + ": forward orbit of t_n leaves U_n at n=" + std::to_string(n)};
    const auto& row = rep.rows[static_cast<std::size_t>(n - 1)];
    if (!row.pass) return {false, label + ": row " + std::to_string(n) + " " + row.note};
    if (!row.level_t.at_least(n - rep.c)) return {false, label + ": level bound fails at n=" + std::to_string(n)};
  }
  return {rep.c <= 1, label + " c=" + std::to_string(rep.c)};
}

Outcome net_experiment_levels() {
  const auto a = net_levels(ShiftModel(2), "shift");
  const auto b = net_levels(LinearModel(2), "linear");
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

template <class M>
Outcome distances(const M& model, const std::string& label) {
  const int level = 6;
  const auto rep = limits::net_experiment(model, limits::default_schedule(model, 8), level);
  int prev_con = -1, prev_nub = -1;
  std::string trace;
  for (const auto& row : rep.rows) {
    // Distances 2^{-e}: non-increasing means e non-decreasing.
    if (row.d_con.exponent() < prev_con || row.d_nub.exponent() < prev_nub) return {false, label + ": not monotone"};
    prev_con = row.d_con.exponent();
    prev_nub = row.d_nub.exponent();
    if (row.n >= level && !(row.d_con.indistinguishable() && row.d_nub.indistinguishable()))
      return {false, label + ": not indistinguishable at n=" + std::to_string(row.n)};
    trace += (trace.empty() ? "" : ",") + row.d_con.to_string();
  }
  return {rep.monotone && rep.reached, label + " d_con " + trace};
}

Outcome distance_rows() {
  const auto a = distances(ShiftModel(2), "shift");
  const auto b = distances(LinearModel(2), "linear");
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome tidy_theorem() {
  std::string detail;
  // (a) level-0 GL_2(Z_p) and diag(p,1).
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto proc = dynamics::tidy_above_procedure(b, b.reference(), diag({p, 1}), 10, 2);
    if (proc.k != 1 || !(b.image(proc.v, 2) == b.image(b.iwahori(), 2)))
      return {false, "procedure gave k=" + std::to_string(proc.k) + " for p=" + std::to_string(p)};
    if (proc.rejected.empty() || !proc.rejected[0].witness) return {false, "no level-0 failure witness"};
  }
  detail += "procedure k=1 Iwahori; ";
  // (b) W(k) tidy above, not tidy below, with a witness that really lies in U_{--} \ U.
  ShiftModel a(2);
  const auto g = a.parse("shift:1");
  for (int k = 0; k <= 3; ++k) {
    const auto u = a.filtration(k);
    if (dynamics::is_tidy_above(a, u, g, 4).verdict != Verdict::True) return {false, "W(" + std::to_string(k) + ") not tidy above"};
    const auto below = dynamics::is_tidy_below(a, u, g, 20);
    if (below.verdict != Verdict::False || !below.witness) return {false, "W(" + std::to_string(k) + ") has no below witness"};
    const auto parts = *a.symbolic_parts(u, g);
    const auto& w = *below.witness;
    if (!a.contains(u, w) || !a.contains(parts.minus_minus, w) || a.contains(parts.minus, w))
      return {false, "witness for W(" + std::to_string(k) + ") does not separate"};
  }
  detail += "W(0..3) witnessed; ";
  // (c) window identities on both batteries.
  int identities = 0;
  for (const char* gs : {"shift:1", "shift:-1", "shift:2", "lamp:0;shift:1", "lamp:0,3"}) {
    const auto h = a.parse(gs);
    for (int k = 1; k <= 3; ++k) {
      if (std::abs(h.shift) > 2 * k + 1) continue;
      const auto rep = verify::structure_identities(a, a.filtration(k), h, 4, false);
      if (!rep.pass()) return {false, std::string("identity fails for ") + gs};
      identities += static_cast<int>(rep.checks.size());
    }
    const auto rep = verify::structure_identities(a, *a.tidy_subgroup(h), h, 4, true);
    if (!rep.pass()) return {false, std::string("tidy identity fails for ") + gs};
    identities += static_cast<int>(rep.checks.size());
  }
  LinearModel b(2);
  for (const auto& h : {diag({2, 1}), diag({1, 2}), diag({4, 1}), diag({Rational(1, 2), 2}), b.identity()}) {
    for (const auto& u : {b.iwahori(), b.filtration(1)}) {
      const auto rep = verify::structure_identities(b, u, h, 4, false);
      if (!rep.pass()) return {false, "linear identity fails for " + b.format(h)};
      identities += static_cast<int>(rep.checks.size());
    }
    const auto rep = verify::structure_identities(b, *b.tidy_subgroup(h), h, 4, true);
    if (!rep.pass()) return {false, "linear tidy identity fails for " + b.format(h)};
    identities += static_cast<int>(rep.checks.size());
  }
  return {true, detail + std::to_string(identities) + " window identities at K<=4"};
}

template <class M>
Outcome nub_battery(const M& model, const std::vector<typename M::Element>& elements, int level,
                    const std::function<std::size_t(const typename M::Element&)>& expected, const std::string& label) {
  static const std::vector<std::string> required{"con-closures", "bco-closure", "con-par", "rbco", "tidy"};
  for (const auto& g : elements) {
    const auto rep = dynamics::nub_compute(model, g, level, 3);  // throws Disagreement on a mismatch
    for (const auto& name : required) {
      const auto it = std::find_if(rep.routes.begin(), rep.routes.end(), [&](const auto& r) { return r.name == name; });
      if (it == rep.routes.end() || !it->image) return {false, label + ": route " + name + " unavailable for " + model.format(g)};
    }
    if (rep.image.size() != expected(g)) return {false, label + ": unexpected nub size for " + model.format(g)};
  }
  return {true, label + " " + std::to_string(elements.size()) + " elements"};
}

Outcome nub_characterizations() {
  ShiftModel a(2);
  std::vector<shift::ShiftElement> sa;
  for (const char* s : {"shift:1", "shift:-1", "shift:2", "lamp:0;shift:1", "lamp:-2,1;shift:-1", "shift:-3"})
    sa.push_back(a.parse(s));
  const auto ra = nub_battery<ShiftModel>(a, sa, 4, [&](const auto&) { return a.window(4).order(); }, "shift");
  LinearModel b(2);
  const QMatrix h(2, {1, 1, 0, 1});
  const std::vector<QMatrix> sb{diag({2, 1}), diag({1, 2}), diag({2, Rational(1, 2)}), diag({4, 1}), b.identity(),
                                h * diag({2, 1}) * h.inverse()};
  const auto rb = nub_battery<LinearModel>(b, sb, 3, [](const auto&) { return std::size_t{1}; }, "linear");
  return {ra.pass && rb.pass, ra.detail + "; " + rb.detail};
}

Outcome scale_consistency() {
  std::string detail;
  int checked = 0;
  const auto check = [&](const auto& model, const auto& g, std::uint64_t expected, int level) {
    const auto idx = dynamics::scale_index(model, g, level);
    if (idx.value != expected || model.scale_formula(g) != expected) {
      detail = model.format(g) + ": index " + std::to_string(idx.value) + ", formula " +
               std::to_string(model.scale_formula(g)) + ", expected " + std::to_string(expected);
      return false;
    }
    ++checked;
    return true;
  };
  for (int p : {2, 3}) {
    LinearModel b(p);
    const std::uint64_t pp = static_cast<std::uint64_t>(p);
    const QMatrix h(2, {1, Rational(1, p), 0, 1});
    const QMatrix c(2, {1, 0, p, 1});
    const auto conj = [](const QMatrix& x, const QMatrix& y) { return x * y * x.inverse(); };
    if (!check(b, diag({p, 1}), pp, 2) || !check(b, diag({p, Rational(1, p)}), pp * pp, 2) ||
        !check(b, b.identity(), 1, 2) || !check(b, conj(h, diag({p, 1})), pp, 2) ||
        !check(b, conj(c, diag({p, Rational(1, p)})), pp * pp, 2))
      return {false, detail};
  }
  LinearModel b3(2, 3);
  // The index at a tidy subgroup is computed first; the formula value must then agree.
  if (!check(b3, diag({4, 2, 1}), 16, 2)) return {false, detail};
  ShiftModel a(2);
  for (const char* g : {"shift:1", "shift:-2", "lamp:0;shift:1"})
    if (!check(a, a.parse(g), 1, 3)) return {false, detail};
  return {true, std::to_string(checked) + " elements"};
}

Outcome quotient_anisotropy() {
  std::mt19937_64 rng(5);
  ShiftModel a(2);
  const std::vector<std::vector<shift::ShiftElement>> schedules{
      {a.parse("shift:1"), a.parse("lamp:0;shift:1"), a.parse("shift:-2")}, {a.identity(), a.parse("lamp:0,3")}};
  int runs = 0;
  for (auto kind : {verify::NormalKind::LampSubgroup, verify::NormalKind::Trivial})
    for (const auto& s : schedules)
      for (int k = 0; k <= 4; ++k, ++runs) {
        const auto rep = verify::quotient_anisotropy_check({a, kind}, s, k, rng);
        if (!rep.pass) return {false, "N=" + verify::to_string(kind) + " K=" + std::to_string(k)};
      }
  return {true, std::to_string(runs) + " runs, both directions"};
}

Outcome normal_closure() {
  std::mt19937_64 rng(11);
  int ok = 0;
  for (int p : {2, 3}) {
    std::uniform_int_distribution<int> pos(-10, 10), digit(0, p - 1), count(0, 10);
    for (int i = 0; i < 100; ++i) {
      std::vector<std::pair<shift::Pos, int>> terms;
      for (int j = count(rng); j > 0; --j) terms.emplace_back(pos(rng), digit(rng));
      const auto b = shift::EPSeq::from_support(p, terms);
      const auto w = verify::normal_closure_witness(b);
      // Independent recomputation of (a,0)(0,1)(a,0)^{-1}(0,1)^{-1}.
      const auto la = shift::ShiftElement::lamp_only(w.a);
      const auto g = shift::ShiftElement::translation(p, 1);
      if (!w.replay || !(la * g * shift::inverse(la) * shift::inverse(g) == shift::ShiftElement::lamp_only(b)))
        return {false, "replay fails"};
      ++ok;
    }
  }
  return {true, std::to_string(ok) + " witnesses replayed"};
}

template <class W>
std::set<kernel::Code> naive_closure(const W& w, const std::vector<kernel::Code>& gens) {
  std::set<kernel::Code> s{w.identity()};
  s.insert(gens.begin(), gens.end());
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<kernel::Code> cur(s.begin(), s.end());
    for (auto x : cur)
      for (auto y : cur)
        if (s.insert(w.mul(x, y)).second) grew = true;
  }
  return s;
}

template <class W>
bool kernel_oracles_on(const W& w, std::mt19937_64& rng, int trials) {
  const auto all = w.all_elements();
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  std::uniform_int_distribution<int> ngens(0, 3);
  for (int t = 0; t < trials; ++t) {
    std::vector<kernel::Code> ga, gb;
    for (int i = ngens(rng); i > 0; --i) ga.push_back(all[pick(rng)]);
    for (int i = ngens(rng); i > 0; --i) gb.push_back(all[pick(rng)]);
    const auto a = kernel::subgroup_closure(w, std::span<const kernel::Code>(ga));
    const auto b = kernel::subgroup_closure(w, std::span<const kernel::Code>(gb));
    const auto na = naive_closure(w, ga);
    if (std::set<kernel::Code>(a.elements().begin(), a.elements().end()) != na) return false;
    // Product set against the full double loop.
    std::set<kernel::Code> prod;
    for (auto x : a.elements())
      for (auto y : b.elements()) prod.insert(w.mul(x, y));
    const auto ps = kernel::product_set(w, a, b);
    if (std::set<kernel::Code>(ps.begin(), ps.end()) != prod) return false;
    const auto target = kernel::trusted_subgroup(w.id(), std::vector<kernel::Code>(prod.begin(), prod.end()));
    if (!kernel::product_set_equals(w, a, b, target).equal) return false;
    // Index of a ∩ b in a by counting left cosets.
    const auto ab = kernel::intersect(a, b);
    std::set<std::set<kernel::Code>> cosets;
    for (auto x : a.elements()) {
      std::set<kernel::Code> c;
      for (auto y : ab.elements()) c.insert(w.mul(x, y));
      cosets.insert(c);
    }
    if (kernel::index(a, ab) != cosets.size()) return false;
  }
  return true;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(17);
  if (!kernel_oracles_on(kernel::LampWindow(2, 2), rng, 60)) return {false, "F_2 window"};
  if (!kernel_oracles_on(kernel::MatrixWindow(2, 2, 2), rng, 40)) return {false, "GL_2(Z/4)"};
  ShiftModel a(2);
  std::vector<limits::ClosedSubgroupApprox> xs;
  for (int k = 0; k <= 3; ++k) xs.push_back(limits::approximate(a, *a.filtration(k).as_lamp_set(), 3));
  xs.push_back(limits::approximate(a, shift::LampSet::trivial(2), 3));
  for (const char* g : {"shift:1", "shift:-1", "lamp:0"}) xs.push_back(limits::approximate(a, a.con_set(a.parse(g)), 3));
  LinearModel b(2);
  std::vector<limits::ClosedSubgroupApprox> ys;
  for (int k = 0; k <= 2; ++k) ys.push_back(limits::approximate(b, b.filtration(k), 3));
  ys.push_back(limits::approximate(b, b.iwahori(), 3));
  for (const auto& g : {diag({2, 1}), diag({1, 2})}) ys.push_back(limits::approximate(b, b.con_set(g), 3));
  int triples = 0;
  for (const auto* battery : {&xs, &ys})
    for (const auto& x : *battery)
      for (const auto& y : *battery) {
        const auto dxy = limits::chabauty_distance(x, y);
        if (!(dxy == limits::chabauty_distance(y, x))) return {false, "asymmetric distance"};
        if (dxy.indistinguishable() != (x.images == y.images)) return {false, "identity of indiscernibles"};
        for (const auto& z : *battery) {
          ++triples;
          if (limits::chabauty_distance(x, z).exponent() <
              std::min(dxy.exponent(), limits::chabauty_distance(y, z).exponent()))
            return {false, "ultrametric inequality"};
        }
      }
  return {true, "closure/product/index match enumeration; " + std::to_string(triples) + " ultrametric triples"};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const std::string base = std::string(TDLC_CLI_PATH) + " theorem-check --which all --seed 7 --out ";
  const std::string a = "acceptance_run_a.jsonl", b = "acceptance_run_b.jsonl";
  const int ra = std::system((base + a).c_str());
  const int rb = std::system((base + b).c_str());
  const auto ta = slurp(a), tb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  if (ra != 0 || rb != 0) return {false, "nonzero exit status"};
  if (ta.empty() || ta != tb) return {false, "outputs differ"};
  return {true, std::to_string(std::count(ta.begin(), ta.end(), '\n')) + " identical rows"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0 = no runtime bound
  };
  const std::vector<Criterion> criteria{
      {"forward conjugator replay", forward_replay, 60},
      {"two-sided conjugator replay", two_sided_replay, 0},
      {"con and nub transport", transport, 0},
      {"net experiment levels", net_experiment_levels, 0},
      {"Chabauty distance rows", distance_rows, 0},
      {"tidy procedure, witnesses and identities", tidy_theorem, 0},
      {"nub characterizations agree", nub_characterizations, 0},
      {"scale index equals formula", scale_consistency, 30},
      {"quotient anisotropy", quotient_anisotropy, 0},
      {"normal closure witness", normal_closure, 0},
      {"oracle equivalence", oracle_equivalence, 0},
      {"theorem-check determinism", determinism, 0},
  };
  bool all = true;
  int i = 0;
  for (const auto& c : criteria) {
    ++i;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    all = all && o.pass;
    std::printf("%s %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i, c.name, secs, o.detail.c_str());
  }
  return all ? 0 : 1;
}
