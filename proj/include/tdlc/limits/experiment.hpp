#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/level.hpp"
#include "tdlc/limits/chabauty.hpp"
#include "tdlc/limits/conjugator.hpp"
#include "tdlc/linear/model.hpp"
#include "tdlc/shift/model.hpp"

namespace tdlc::limits {

/// g, perturbations u_n (n = 1..N) and a shrinking chain U_0 ⊇ U_1 ⊇ ... ⊇ U_N of subgroups
/// tidy above for g with u_n ∈ U_n.
template <class M>
struct NetSchedule {
  typename M::Element g;
  std::vector<typename M::Element> perturbations;  ///< u_n at index n - 1
  std::vector<typename M::CompactOpen> chain;      ///< U_n at index n
};

/// g = shift:1, u_n = δ_{n+1}, U_n = W(n).
inline NetSchedule<shift::ShiftModel> default_schedule(const shift::ShiftModel& model, int count,
                                                        bool degenerate = false) {
  NetSchedule<shift::ShiftModel> s{model.parse("shift:1"), {}, {}};
  for (int n = 0; n <= count; ++n) s.chain.push_back(model.filtration(n));
  for (int n = 1; n <= count; ++n)
    s.perturbations.push_back(degenerate ? model.identity()
                                         : shift::ShiftElement::lamp_only(shift::EPSeq::delta(model.p(), n + 1)));
  return s;
}

/// g = diag(p, 1, ..., 1), u_n = I + p^n E_21, U_n = Iwahori ∩ B_n.
inline NetSchedule<linear::LinearModel> default_schedule(const linear::LinearModel& model, int count,
                                                          bool degenerate = false) {
  using linear::QMatrix;
  std::vector<linear::Rational> d(static_cast<std::size_t>(model.n()), linear::Rational(1));
  d[0] = model.p();
  NetSchedule<linear::LinearModel> s{QMatrix::diagonal(d), {}, {}};
  const auto iw = model.iwahori();
  for (int n = 0; n <= count; ++n)
    s.chain.emplace_back(model.p(), max(iw.shape(), linear::ValShape::constant(model.n(), n)));
  for (int n = 1; n <= count; ++n) {
    QMatrix u = model.identity();
    if (!degenerate && model.n() > 1) u(1, 0) = linear::ppow(model.p(), n);
    s.perturbations.push_back(u);
  }
  return s;
}

struct NetRow {
  int n = 0;
  Level level_u = Level::outside();
  Level level_t = Level::outside();
  Level level_r = Level::outside();
  Distance d_con;
  Distance d_nub;
  bool pass = true;
  std::string note;
};

struct NetReport {
  std::vector<NetRow> rows;
  std::int64_t c = 0;  ///< least c with level(t_n) >= n - c for every row
  bool monotone = true;       ///< d_con and d_nub non-increasing in n
  bool reached = true;        ///< both indistinguishable once n >= K (when the run gets there)
  bool pass = true;
};

namespace detail {

template <class M>
bool in_plus(const M& model, const typename M::CompactOpen& u, const typename M::Element& g,
             const typename M::Element& t, int level) {
  if (const auto parts = model.symbolic_parts(u, g)) return model.contains(parts->plus, t);
  const auto parts = dynamics::u_parts(model, u, g, level);
  return model.contains(u, t) && dynamics::part_image(model, parts, dynamics::Part::Plus, level).contains(model.project(t, level));
}

template <class M>
ClosedSubgroupApprox nub_approx(const M& model, const typename M::Element& g, int level) {
  return approximate(model, model.intersect(model.closure(model.con_set(g)), model.closure(model.con_set(model.inv(g)))),
                     level);
}

}  // namespace detail

/// For each n: t_n from the forward conjugator for (g, u_n, U_n), moved into con(g^{-1});
/// r_n from the two-sided conjugator on the largest chain member U_m with
/// u_n ∈ U_m ∩ g^{-1} U_m g; and Chabauty distances at level K between con-closures
/// (intersected with the reference) and between nubs of g and g u_n.
template <class M>
NetReport net_experiment(const M& model, const NetSchedule<M>& schedule, int level, int steps = 12,
                         int check_level = 2) {
  NetReport rep;
  const auto& g = schedule.g;
  const auto con_g = approximate(model, model.closure(model.con_set(g)), level);
  const auto nub_g = detail::nub_approx(model, g, level);
  const int count = static_cast<int>(schedule.perturbations.size());
  for (int n = 1; n <= count; ++n) {
    const auto& u = schedule.perturbations[static_cast<std::size_t>(n - 1)];
    const auto& un = schedule.chain.at(static_cast<std::size_t>(n));
    if (!model.contains(un, u))
      throw CheckFailed("net_experiment: u_" + std::to_string(n) + " is not in U_" + std::to_string(n));
    NetRow row;
    row.n = n;
    row.level_u = model.proximity(u);

    auto fwd = conjugator_forward(model, g, u, un, steps, check_level);
    const auto adj = adjust_to_contraction(model, fwd.t, un, g);
    fwd = with_adjusted(model, std::move(fwd), adj);
    const auto rf = replay(model, fwd.g, fwd.u, fwd.subgroup, fwd.t, fwd.certificates);
    row.level_t = model.proximity(fwd.t);
    if (!rf.ok) {
      row.pass = false;
      row.note = "forward replay failed at k=" + std::to_string(rf.failing_k);
    }
    if (!detail::in_plus(model, un, g, fwd.t, check_level)) {
      row.pass = false;
      row.note = "t_n not in (U_n)_+";
    }

    int m = n;
    while (m >= 0 && !(model.contains(schedule.chain[static_cast<std::size_t>(m)], u) &&
                       model.contains(schedule.chain[static_cast<std::size_t>(m)], model.conj(g, u))))
      --m;
    if (m < 0) {
      row.pass = false;
      row.note = "no chain member contains u_n and g u_n g^{-1}";
      row.level_r = Level::outside();
    } else {
      const auto two = conjugator_two_sided(model, g, u, schedule.chain[static_cast<std::size_t>(m)], steps, check_level);
      row.level_r = model.proximity(two.r);
      const auto rr = replay(model, two);
      if (!rr.ok) {
        row.pass = false;
        row.note = "two-sided replay failed at k=" + std::to_string(rr.failing_k);
      }
    }

    const auto gu = model.mul(g, u);
    row.d_con = chabauty_distance(con_g, approximate(model, model.closure(model.con_set(gu)), level));
    row.d_nub = chabauty_distance(nub_g, detail::nub_approx(model, gu, level));
    rep.pass = rep.pass && row.pass;
    const auto lt = row.level_t.is_infinite() ? std::int64_t{n} : (row.level_t.is_outside() ? -1 : row.level_t.value());
    rep.c = std::max<std::int64_t>(rep.c, n - lt);
    rep.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    rep.monotone = rep.monotone && rep.rows[i].d_con.exponent() >= rep.rows[i - 1].d_con.exponent() &&
                   rep.rows[i].d_nub.exponent() >= rep.rows[i - 1].d_nub.exponent();
  }
  for (const auto& r : rep.rows)
    if (r.n >= level) rep.reached = rep.reached && r.d_con.indistinguishable() && r.d_nub.indistinguishable();
  rep.pass = rep.pass && rep.monotone && rep.reached;
  return rep;
}

}  // namespace tdlc::limits
