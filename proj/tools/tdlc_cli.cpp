#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdlc/cli/checks.hpp"
#include "tdlc/cli/commands.hpp"
#include "tdlc/cli/config.hpp"
#include "tdlc/cli/report.hpp"

namespace {

struct Flags {
  std::string model;
  int p = 2;
  int n = 2;
  int resolution = 0;
  int horizon = 0;
  int max_k = 10;
  std::uint64_t seed = 1;
  int samples = 50;
  std::string config;
  std::string out;
};

// Config file first, then every flag given on the command line.
tdlc::cli::RunConfig merged(const Flags& f, const CLI::App& app) {
  tdlc::cli::RunConfig cfg;
  if (!f.config.empty()) cfg = tdlc::cli::load_config(f.config);
  const auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
  if (given("--model")) cfg.model = f.model;
  if (given("--p")) cfg.p = f.p;
  if (given("--n")) cfg.n = f.n;
  if (given("--resolution")) cfg.resolution = f.resolution;
  if (given("--horizon")) cfg.horizon = f.horizon;
  if (given("--max-k")) cfg.max_k = f.max_k;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--samples")) cfg.samples = f.samples;
  if (given("--out")) cfg.out = f.out;
  cfg.validate();
  return cfg;
}

int emit(const tdlc::cli::RunConfig& cfg, const std::vector<tdlc::cli::Row>& rows, bool extra_ok = true) {
  if (cfg.out.empty()) {
    tdlc::cli::write_rows(std::cout, rows);
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw tdlc::Error("cannot open output file " + cfg.out);
    tdlc::cli::write_rows(out, rows);
    if (!out) throw tdlc::Error("write failed: " + cfg.out);
  }
  return tdlc::cli::all_pass(rows) && extra_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale, tidy subgroups, contraction groups and Chabauty limits in two model groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--model", f.model, "shift or linear")->check(CLI::IsMember({"shift", "linear"}));
  app.add_option("--p", f.p, "prime");
  app.add_option("--n", f.n, "matrix size for the linear model");
  app.add_option("--resolution", f.resolution, "window level K");
  app.add_option("--horizon", f.horizon, "step horizon N");
  app.add_option("--max-k", f.max_k, "cap on the tidying procedure");
  app.add_option("--seed", f.seed, "seed of the run's random generator");
  app.add_option("--samples", f.samples, "sample size for transport checks");
  app.add_option("--config", f.config, "JSON config file; flags override its keys");
  app.add_option("--out", f.out, "write JSON lines here instead of stdout");

  std::string g, x, u, subgroup, which = "all", b;
  int count = 8;
  bool two_sided = false, degenerate = false;

  auto* scale = app.add_subcommand("scale", "scale of g: index at a tidy subgroup and the closed formula");
  scale->add_option("--g,--matrix", g, "element")->required();
  auto* tidy = app.add_subcommand("tidy", "tidy above procedure and tidy below verdict for (U, g)");
  tidy->add_option("--U", subgroup, "compact open subgroup")->required();
  tidy->add_option("--g,--matrix", g, "element")->required();
  auto* con = app.add_subcommand("con-test", "membership of x in con(g) and par(g)");
  con->add_option("--g,--matrix", g, "element")->required();
  con->add_option("--x", x, "candidate element")->required();
  auto* nub = app.add_subcommand("nub", "window image of the nub of g by every available route");
  nub->add_option("--g,--matrix", g, "element")->required();
  auto* conj = app.add_subcommand("conjugator", "conjugator t (or r) for g and gu, with exact replay");
  conj->add_option("--g,--matrix", g, "element")->required();
  conj->add_option("--u", u, "perturbation in U")->required();
  conj->add_option("--U", subgroup, "compact open subgroup")->required();
  conj->add_flag("--two-sided", two_sided, "bi-infinite variant (u must lie in U ∩ g^-1 U g)");
  auto* experiment = app.add_subcommand("experiment", "experiments");
  experiment->require_subcommand(1);
  auto* lim = experiment->add_subcommand("limits", "net experiment: conjugators and Chabauty distances along a schedule");
  lim->add_option("--count", count, "schedule length")->check(CLI::Range(0, 16));
  lim->add_flag("--degenerate", degenerate, "identity perturbations");
  auto* thm = app.add_subcommand("theorem-check", "invariant batteries; --which all runs every check");
  thm->add_option("--which", which, "check name or all");
  thm->add_option("--b", b, "lamp element for normal-closure, e.g. lamp:0");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = merged(f, app);
    if (scale->parsed()) return emit(cfg, tdlc::cli::cmd_scale(cfg, g));
    if (tidy->parsed()) return emit(cfg, tdlc::cli::cmd_tidy(cfg, subgroup, g));
    if (con->parsed()) return emit(cfg, tdlc::cli::cmd_con_test(cfg, g, x));
    if (nub->parsed()) return emit(cfg, tdlc::cli::cmd_nub(cfg, g));
    if (conj->parsed()) return emit(cfg, tdlc::cli::cmd_conjugator(cfg, g, u, subgroup, two_sided));
    if (lim->parsed()) {
      bool ok = true;
      auto rows = tdlc::cli::cmd_experiment_limits(cfg, count, degenerate, &ok);
      return emit(cfg, rows, ok);
    }
    if (thm->parsed()) return emit(cfg, tdlc::cli::cmd_theorem_check(cfg, which, {b}));
  } catch (const tdlc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
