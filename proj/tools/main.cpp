// Command-line driver: parameter sweeps, single-point solves, and problem
// dumps for the variational 2-RDM lower-bound calculations.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "v2rdm/ground_state.hpp"
#include "v2rdm/sweep.hpp"

namespace fs = std::filesystem;
using namespace v2rdm;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<int> sites;
  std::optional<double> t, u;
  std::optional<std::vector<double>> v_grid;
  std::optional<std::vector<std::string>> levels;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool no_sz_row = false;
  std::optional<std::string> boundary;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--L", f.sites, "lattice sites");
  cmd->add_option("--t", f.t, "hopping amplitude");
  cmd->add_option("--U", f.u, "on-site repulsion");
  cmd->add_option("--V-grid", f.v_grid, "V values (space separated)");
  cmd->add_option("--levels", f.levels, "condition levels (2pos, 2pos_t2)");
  cmd->add_option("--tol", f.tol, "solver tolerance");
  cmd->add_option("--max-iter", f.max_iter, "solver iteration cap");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (0 = auto)");
  cmd->add_flag("--no-sz-row", f.no_sz_row, "drop the <S_z> constraint row");
  cmd->add_option("--boundary", f.boundary, "periodic or open");
}

ExperimentConfig resolve_config(const CommonFlags& f, ExperimentConfig base) {
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw std::runtime_error("cannot read " + f.config_path);
    std::stringstream ss;
    ss << is.rdbuf();
    base = parse_config(ss.str());
  }
  if (f.sites) base.sites = *f.sites;
  if (f.t) base.t = *f.t;
  if (f.u) base.u = *f.u;
  if (f.v_grid) base.v_grid = *f.v_grid;
  if (f.levels) {
    base.levels.clear();
    for (const auto& s : *f.levels) {
      if (s == "2pos")
        base.levels.push_back(ConditionLevel::TwoPos);
      else if (s == "2pos_t2")
        base.levels.push_back(ConditionLevel::TwoPosT2);
      else
        throw std::runtime_error("unknown level: " + s);
    }
  }
  if (f.tol) base.eps = *f.tol;
  if (f.max_iter) base.max_iter = *f.max_iter;
  if (f.out) base.out_dir = *f.out;
  if (f.threads) base.threads = *f.threads;
  if (f.no_sz_row) base.sz_row = false;
  if (f.boundary) {
    if (*f.boundary == "periodic")
      base.boundary = Boundary::periodic;
    else if (*f.boundary == "open")
      base.boundary = Boundary::open;
    else
      throw std::runtime_error("boundary must be periodic or open");
  }
  return base;
}

int finish_sweep(const SweepResult& result, const ExperimentConfig& config) {
  const fs::path dir(config.out_dir);
  const std::string csv = (dir / (result.experiment + ".csv")).string();
  const std::string jsn = (dir / (result.experiment + ".json")).string();
  emit_results(result, csv, jsn);

  int n_flagged = 0;
  for (const auto& r : result.records) n_flagged += r.flagged ? 1 : 0;
  std::printf("%s: %zu points -> %s, %s\n", result.experiment.c_str(),
              result.records.size(), csv.c_str(), jsn.c_str());
  if (result.fit) {
    std::printf("log-log wall-time fit: slope %.3f (R^2 %.4f)\n",
                result.fit->slope, result.fit->r_squared);
  }
  if (n_flagged > 0) {
    std::printf("FLAGGED POINTS (%d):\n", n_flagged);
    for (const auto& r : result.records) {
      if (!r.flagged) continue;
      std::printf("  L=%d level=%s V=%.6g status=%s error=%.3e\n", r.sites,
                  r.level.c_str(), r.v, r.status.c_str(), r.error);
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational 2-RDM energy lower bounds for the extended "
               "Hubbard chain"};
  app.require_subcommand(1);

  CommonFlags fig1_flags, fig2_flags, scale_flags, solve_flags, dump_flags;

  auto* fig1 = app.add_subcommand(
      "fig1", "t=0 energy sweep over V against the analytic CDW/SDW crossing");
  add_common_flags(fig1, fig1_flags);

  auto* fig2 = app.add_subcommand(
      "fig2", "t=U=1 sweep over U/V against exact diagonalization");
  add_common_flags(fig2, fig2_flags);
  std::optional<std::vector<double>> ratio_grid;
  std::optional<int> sites_t2;
  fig2->add_option("--UV-grid", ratio_grid, "U/V ratios (space separated)");
  fig2->add_option("--L-t2", sites_t2, "lattice sites for the T2 level");

  auto* scale = app.add_subcommand(
      "scale", "t=0 cost-vs-L benchmark at fixed 2-positivity");
  add_common_flags(scale, scale_flags);
  std::optional<std::vector<int>> l_grid;
  scale->add_option("--L-grid", l_grid, "lattice sizes (space separated)");

  auto* solve_one =
      app.add_subcommand("solve-one", "solve a single parameter point");
  add_common_flags(solve_one, solve_flags);
  double sv = 0.0;
  bool with_certificate = false;
  bool with_oracle = false;
  int log_every = 0;
  double mu0 = 0.0;
  std::optional<int> nup_override, ndown_override;
  solve_one->add_option("--V", sv, "nearest-neighbor repulsion");
  solve_one->add_flag("--certificate", with_certificate,
                      "print the dual-certificate summary");
  solve_one->add_flag("--oracle", with_oracle,
                      "also run exact diagonalization");
  solve_one->add_option("--log-every", log_every,
                        "stream iteration records to stderr every N iterations");
  solve_one->add_option("--mu0", mu0, "initial penalty parameter");
  int rebalance = -1;
  solve_one->add_option("--rebalance", rebalance, "mu rebalance cadence");
  solve_one->add_option("--nup", nup_override, "up-spin electrons");
  solve_one->add_option("--ndown", ndown_override, "down-spin electrons");

  auto* dump =
      app.add_subcommand("dump-problem", "write the assembled SDP to a file");
  add_common_flags(dump, dump_flags);
  double dv = 0.0;
  std::string dump_path = "problem.sdp";
  bool dump_triplets = false;
  dump->add_option("--V", dv, "nearest-neighbor repulsion");
  dump->add_option("--file", dump_path, "output path");
  dump->add_flag("--triplets", dump_triplets,
                 "write the constraint triplet format instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fig1->parsed()) {
      auto config = resolve_config(fig1_flags, ExperimentConfig::fig1_defaults());
      ensure_writable_dir(config.out_dir);
      return finish_sweep(run_fig1_sweep(config), config);
    }

    if (fig2->parsed()) {
      auto config = resolve_config(fig2_flags, ExperimentConfig::fig2_defaults());
      if (ratio_grid) config.u_over_v_grid = *ratio_grid;
      if (sites_t2) config.sites_t2 = *sites_t2;
      ensure_writable_dir(config.out_dir);
      return finish_sweep(run_fig2_sweep(config), config);
    }

    if (scale->parsed()) {
      auto config = resolve_config(scale_flags, ExperimentConfig::scale_defaults());
      if (l_grid) config.l_grid = *l_grid;
      ensure_writable_dir(config.out_dir);
      return finish_sweep(run_scaling_benchmark(config), config);
    }

    if (solve_one->parsed()) {
      auto config = resolve_config(solve_flags, ExperimentConfig::fig1_defaults());
      if (nup_override) config.n_up = nup_override;
      if (ndown_override) config.n_down = ndown_override;
      LatticeSpec spec = config.lattice(config.sites);
      HubbardParams params{config.t, config.u, sv};
      const ConditionLevel level =
          config.levels.empty() ? ConditionLevel::TwoPos : config.levels.front();

      V2rdmOptions opts;
      opts.solver = config.solver_options();
      opts.sz_row = config.sz_row;
      if (log_every > 0) {
        opts.solver.log = &std::cerr;
        opts.solver.log_every = log_every;
      }
      if (mu0 > 0.0) opts.solver.mu0 = mu0;
      if (rebalance >= 0) opts.solver.mu_rebalance_every = rebalance;
      V2rdmAssembly assembly = assemble(spec, params, level, opts);
      V2rdmResult res = solve(assembly, opts.solver);

      std::printf("L=%d boundary=%s N_up=%d N_down=%d t=%g U=%g V=%g level=%s\n",
                  spec.sites,
                  spec.boundary == Boundary::periodic ? "periodic" : "open",
                  spec.n_up, spec.n_down, params.t, params.u, params.v,
                  to_string(level));
      std::printf("energy_sdp    %.10f\n", res.energy);
      std::printf("status        %s after %d iterations\n",
                  to_string(res.status), res.iterations);
      std::printf("residuals     primal %.3e  dual %.3e  gap %.3e\n",
                  res.primal_inf, res.dual_inf, res.gap);
      std::printf("complementarity %.3e\n", res.complementarity);
      for (const auto& [name, eig] : res.block_min_eig)
        std::printf("min eig %-4s  %.3e\n", name.c_str(), eig);

      if (with_oracle) {
        FockBasis basis(spec.sites, spec.n_up, spec.n_down);
        auto ed = ground_state(build_extended_hubbard(spec, params), basis);
        std::printf("energy_exact  %.10f   (gap to bound %.3e)\n", ed.energy,
                    ed.energy - res.energy);
      }
      if (with_certificate) {
        DualCertificate cert = dual_certificate(assembly, res.solution);
        std::printf("certificate   residual %.3e (tol %.3e) %s\n",
                    cert.residual, cert.tolerance,
                    cert.within_tolerance ? "ok" : "EXCEEDED");
        std::printf("certificate   %zu factors, beta_min %.3e, sum Tr(Z X) %.3e\n",
                    cert.factors.size(), cert.beta_min,
                    cert.total_complementarity);
      }
      return res.status == SolveStatus::converged ? 0 : 1;
    }

    if (dump->parsed()) {
      auto config = resolve_config(dump_flags, ExperimentConfig::fig1_defaults());
      LatticeSpec spec = config.lattice(config.sites);
      HubbardParams params{config.t, config.u, dv};
      const ConditionLevel level =
          config.levels.empty() ? ConditionLevel::TwoPos : config.levels.front();
      V2rdmOptions opts;
      opts.sz_row = config.sz_row;
      V2rdmAssembly assembly = assemble(spec, params, level, opts);
      std::ofstream os(dump_path);
      if (!os) throw std::runtime_error("cannot open " + dump_path);
      if (dump_triplets)
        assembly.problem.constraints.export_triplets(os);
      else
        dump_problem(os, assembly.problem);
      std::printf("wrote %s\n", dump_path.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
