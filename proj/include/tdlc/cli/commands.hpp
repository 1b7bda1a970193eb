#pragma once

#include <random>
#include <string>
#include <vector>

#include "tdlc/cli/config.hpp"
#include "tdlc/cli/report.hpp"
#include "tdlc/dynamics/membership.hpp"
#include "tdlc/dynamics/nub.hpp"
#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/limits/conjugator.hpp"
#include "tdlc/limits/experiment.hpp"
#include "tdlc/linear/model.hpp"
#include "tdlc/shift/model.hpp"

namespace tdlc::cli {

/// Calls f with the model named in the config (or the fallback when unset).
template <class F>
auto with_model(const RunConfig& cfg, const std::string& fallback, F&& f) {
  if (cfg.model_or(fallback) == "linear") return f(linear::LinearModel(cfg.p, cfg.n));
  return f(shift::ShiftModel(cfg.p));
}

template <class M>
Row base_row(const std::string& key, const std::string& id, const M& model, const RunConfig& cfg) {
  Row r;
  r[key] = id;
  r["model"] = M::name();
  Row params;
  params["p"] = cfg.p;
  if constexpr (std::is_same_v<M, linear::LinearModel>) params["n"] = model.n();
  r["params"] = params;
  return r;
}

/// Default resolution for window computations: small enough that images at p = 3 stay
/// under the enumeration cap.
inline int default_level(const RunConfig& cfg, const std::string& model) {
  if (cfg.resolution) return *cfg.resolution;
  return model == "linear" ? 2 : 3;
}

template <class M>
Row witness_row(const limits::ReplayResult<M>& r) {
  Row w;
  w["ok"] = r.ok;
  if (!r.ok) {
    w["failing_k"] = r.failing_k;
    w["detail"] = r.detail;
  }
  return w;
}

inline std::vector<Row> cmd_scale(const RunConfig& cfg, const std::string& g_text) {
  return with_model(cfg, "shift", [&](const auto& model) {
    const int level = default_level(cfg, model.name());
    const auto g = model.parse(g_text);
    auto row = base_row("experiment", "scale", model, cfg);
    row["params"]["resolution"] = level;
    row["params"]["g"] = model.format(g);
    const auto formula = model.scale_formula(g);
    const auto idx = dynamics::scale_index(model, g, level, cfg.max_k);
    row["scale"] = idx.value;
    row["formula"] = formula;
    row["agree"] = idx.value == formula;
    row["tidy"] = model.format(idx.tidy);
    row["pass"] = idx.value == formula;
    return std::vector<Row>{row};
  });
}

inline std::vector<Row> cmd_tidy(const RunConfig& cfg, const std::string& u_text, const std::string& g_text) {
  return with_model(cfg, "shift", [&](const auto& model) {
    const int level = default_level(cfg, model.name());
    const int horizon = cfg.horizon.value_or(20);
    const auto g = model.parse(g_text);
    const auto u = model.parse_compact_open(u_text);
    auto row = base_row("experiment", "tidy", model, cfg);
    row["params"]["resolution"] = level;
    row["params"]["U"] = model.format(u);
    row["params"]["g"] = model.format(g);
    const auto rep = dynamics::tidy_report(model, u, g, cfg.max_k, level, horizon);
    row["k"] = rep.procedure.k;
    row["tidy"] = model.format(rep.procedure.v);
    row["tidy_above"] = to_string(rep.above.verdict);
    Row rejected = Row::array();
    for (std::size_t j = 0; j < rep.procedure.rejected.size(); ++j) {
      const auto& a = rep.procedure.rejected[j];
      rejected.push_back(Row{{"k", j}, {"failing_level", a.failing_level}, {"witness", a.witness_text}});
    }
    row["rejected"] = rejected;
    row["tidy_below"] = to_string(rep.below.verdict);
    if (rep.below.witness) {
      row["below_witness"] = Row{{"x", model.format(*rep.below.witness)}, {"j", rep.below.j}};
    } else if (!rep.below.reason.empty()) {
      row["below_reason"] = rep.below.reason;
    }
    row["pass"] = rep.above.verdict == Verdict::True;
    return std::vector<Row>{row};
  });
}

inline std::vector<Row> cmd_con_test(const RunConfig& cfg, const std::string& g_text, const std::string& x_text) {
  return with_model(cfg, "shift", [&](const auto& model) {
    const int level = default_level(cfg, model.name());
    const int horizon = cfg.horizon.value_or(40);
    const auto g = model.parse(g_text);
    const auto x = model.parse(x_text);
    auto row = base_row("experiment", "con-test", model, cfg);
    row["params"]["resolution"] = level;
    row["params"]["horizon"] = horizon;
    row["params"]["g"] = model.format(g);
    row["params"]["x"] = model.format(x);
    const auto con = dynamics::con_membership(model, g, x, level, horizon);
    const auto par = dynamics::par_membership(model, g, x, horizon);
    row["con"] = to_string(con.verdict);
    row["con_method"] = con.method;
    if (con.first_reached >= 0) row["first_reached"] = con.first_reached;
    row["par"] = to_string(par.verdict);
    row["par_method"] = par.method;
    row["pass"] = con.verdict != Verdict::Inconclusive;
    return std::vector<Row>{row};
  });
}

template <class M>
Row nub_row(const M& model, const RunConfig& cfg, const typename M::Element& g, int level, const std::string& key,
            const std::string& id) {
  auto row = base_row(key, id, model, cfg);
  row["params"]["resolution"] = level;
  row["params"]["g"] = model.format(g);
  try {
    const auto rep = dynamics::nub_compute(model, g, level, 3, cfg.max_k, cfg.seed);
    Row routes = Row::array();
    for (const auto& r : rep.routes) {
      Row rr{{"name", r.name}, {"checked", r.checked}};
      if (r.image)
        rr["size"] = r.image->size();
      else
        rr["size"] = nullptr;
      if (!r.note.empty()) rr["note"] = r.note;
      routes.push_back(rr);
    }
    row["nub_size"] = rep.image.size();
    row["window_order"] = model.window(level).order();
    row["routes"] = routes;
    row["pass"] = rep.all_agree();
  } catch (const Disagreement& e) {
    row["error"] = e.what();
    row["pass"] = false;
  }
  return row;
}

inline std::vector<Row> cmd_nub(const RunConfig& cfg, const std::string& g_text) {
  return with_model(cfg, "shift", [&](const auto& model) {
    const int level = default_level(cfg, model.name());
    return std::vector<Row>{nub_row(model, cfg, model.parse(g_text), level, "experiment", "nub")};
  });
}

/// Conjugator t for (g, u, U); with two_sided the bi-infinite variant r.
inline std::vector<Row> cmd_conjugator(const RunConfig& cfg, const std::string& g_text, const std::string& u_text,
                                       const std::string& subgroup_text, bool two_sided) {
  return with_model(cfg, "shift", [&](const auto& model) {
    const int steps = cfg.horizon.value_or(12);
    const auto g = model.parse(g_text);
    const auto u = model.parse(u_text);
    const auto U = model.parse_compact_open(subgroup_text);
    auto row = base_row("experiment", two_sided ? "conjugator-two-sided" : "conjugator", model, cfg);
    row["params"]["horizon"] = steps;
    row["params"]["g"] = model.format(g);
    row["params"]["u"] = model.format(u);
    row["params"]["U"] = model.format(U);
    if (two_sided) {
      const auto tr = limits::conjugator_two_sided(model, g, u, U, steps);
      const auto rep = limits::replay(model, tr);
      row["r"] = model.format(tr.r);
      row["v_plus"] = model.format(tr.v_plus);
      row["v_minus"] = model.format(tr.v_minus);
      row["level_r"] = to_json(model.proximity(tr.r));
      row["witness"] = witness_row(rep);
      row["pass"] = rep.ok;
    } else {
      const auto tr = limits::conjugator_forward(model, g, u, U, steps);
      const auto rep = limits::replay(model, g, u, U, tr.t, tr.certificates);
      row["t"] = model.format(tr.t);
      row["level_t"] = to_json(model.proximity(tr.t));
      row["witness"] = witness_row(rep);
      row["pass"] = rep.ok;
    }
    return std::vector<Row>{row};
  });
}

/// Resolution for the net experiment: 6 unless the whole lamp window at that level would
/// exceed the enumeration cap (p >= 3 in the shift model).
template <class M>
int limits_level(const M& model, const RunConfig& cfg) {
  if (cfg.resolution) return *cfg.resolution;
  int level = 6;
  if constexpr (std::is_same_v<M, shift::ShiftModel>)
    while (level > 0 && model.window(level).order() > kernel::kDefaultCap) --level;
  return level;
}

template <class M>
std::vector<Row> limits_rows(const M& model, const RunConfig& cfg, int count, bool degenerate, limits::NetReport* out) {
  const int level = limits_level(model, cfg);
  const auto rep = limits::net_experiment(model, limits::default_schedule(model, count, degenerate), level);
  std::vector<Row> rows;
  for (const auto& r : rep.rows) {
    Row row;
    row["experiment"] = "limits";
    row["model"] = M::name();
    row["n"] = r.n;
    row["level_u"] = to_json(r.level_u);
    row["level_t"] = to_json(r.level_t);
    row["level_r"] = to_json(r.level_r);
    row["d_con"] = to_json(r.d_con);
    row["d_nub"] = to_json(r.d_nub);
    row["pass"] = r.pass;
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  if (out) *out = rep;
  return rows;
}

/// Net experiment rows; *ok receives the overall verdict (rows, c, monotonicity).
inline std::vector<Row> cmd_experiment_limits(const RunConfig& cfg, int count, bool degenerate, bool* ok) {
  return with_model(cfg, "shift", [&](const auto& model) {
    limits::NetReport rep;
    auto rows = limits_rows(model, cfg, count, degenerate, &rep);
    if (ok) *ok = rep.pass;
    return rows;
  });
}

}  // namespace tdlc::cli
