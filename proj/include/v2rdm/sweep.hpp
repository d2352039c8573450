#pragma once

#include <optional>
#include <string>
#include <vector>

#include "v2rdm/v2rdm.hpp"

namespace v2rdm {

/// Declarative description of one experiment run. Serialized as JSON; every
/// field has a flag override in the CLI.
struct ExperimentConfig {
  int sites = 6;
  int sites_t2 = 4;  // lattice used for the T2 level in the t=U=1 sweep
  Boundary boundary = Boundary::periodic;
  double t = 0.0;
  double u = 1.0;
  std::vector<double> v_grid;         // t=0 energy sweep; first entry also
                                      // fixes V for the scaling benchmark
  std::vector<double> u_over_v_grid;  // t=U=1 sweep
  std::vector<int> l_grid;            // scaling benchmark
  std::vector<ConditionLevel> levels;
  double eps = 1e-6;
  int max_iter = 20000;
  std::optional<int> n_up, n_down;    // sector override; default half filling
  bool sz_row = true;
  std::string out_dir = ".";
  int threads = 0;                    // 0 = hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;

  /// Grids non-empty and strictly increasing; throws otherwise.
  void validate_grids() const;

  LatticeSpec lattice(int l) const;
  SolverOptions solver_options() const;

  static ExperimentConfig fig1_defaults();
  static ExperimentConfig fig2_defaults();
  static ExperimentConfig scale_defaults();
};

std::string emit_config(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& json_text);

struct SweepRecord {
  double t = 0, u = 0, v = 0, u_over_v = 0;
  int sites = 0;
  std::string level;
  double energy_sdp = 0, energy_ref = 0, error = 0, gap = 0;
  int iters = 0;
  long wall_ms = 0;
  std::string status;
  bool flagged = false;  // tolerance or lower-bound violation, or unconverged
};

struct ScalingFit {
  double slope = 0, intercept = 0, r_squared = 0;
};

struct SweepResult {
  std::string experiment;
  std::vector<SweepRecord> records;
  std::optional<ScalingFit> fit;  // scale runs only

  bool any_flagged() const;
};

/// t = 0 sweep over V at fixed U: the 2-positivity energy against the
/// analytic CDW/SDW crossing. Points off by more than 1e-4 * L are flagged.
SweepResult run_fig1_sweep(const ExperimentConfig& config);

/// t = U = 1 sweep over U/V at the configured levels, against the exact
/// diagonalization oracle. Lower-bound violations are flagged.
SweepResult run_fig2_sweep(const ExperimentConfig& config);

/// Cost-vs-L benchmark at t = 0, 2-positivity, with a log-log fit of wall
/// time against L. Energies are still checked against the analytic value.
SweepResult run_scaling_benchmark(const ExperimentConfig& config);

/// Write CSV and JSON (schema "v2rdm-sweep/1") atomically. Column order:
/// t,U,V,u_over_v,L,level,energy_sdp,energy_ref,error,gap,iters,wall_ms,status
void emit_results(const SweepResult& result, const std::string& csv_path,
                  const std::string& json_path);

SweepResult parse_csv(const std::string& path);
SweepResult parse_json(const std::string& path);

/// Throws unless `dir` exists (or can be created) and is writable.
void ensure_writable_dir(const std::string& dir);

}  // namespace v2rdm
