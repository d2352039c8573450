// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "v2rdm/ground_state.hpp"
#include "v2rdm/rdm_extract.hpp"
#include "v2rdm/sweep.hpp"
#include "v2rdm/v2rdm.hpp"

using namespace v2rdm;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

struct T0Point {
  double v = 0;
  double energy = 0, reference = 0, gap = 0;
  bool converged = false;
  double cert_residual = 0, cert_tolerance = 0, beta_min = 0;
  bool cert_ok = false;
};

// t=0 grid at L=6: solve and certify every point; shared by criteria 1, 2, 6
std::vector<T0Point> run_t0_grid(double* wall_seconds) {
  const int l = 6;
  std::vector<double> grid;
  for (int k = 0; k <= 15; ++k) grid.push_back(0.25 + 0.05 * k);

  const auto t0 = clock_type::now();
  std::vector<T0Point> out;
  LatticeSpec spec = LatticeSpec::half_filled(l);
  for (double v : grid) {
    T0Point pt;
    pt.v = v;
    pt.reference = analytic_t0_energy(l, 1.0, v);
    V2rdmOptions opts;  // defaults: eps 1e-6, 20000 iterations
    V2rdmAssembly assembly =
        assemble(spec, {0.0, 1.0, v}, ConditionLevel::TwoPos, opts);
    V2rdmResult res = solve(assembly, opts.solver);
    pt.energy = res.energy;
    pt.gap = res.gap;
    pt.converged = (res.status == SolveStatus::converged);

    DualCertificate cert = dual_certificate(assembly, res.solution);
    pt.cert_residual = cert.residual;
    pt.cert_tolerance = cert.tolerance;
    pt.beta_min = cert.beta_min;
    pt.cert_ok = cert.within_tolerance;
    out.push_back(pt);
  }
  *wall_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  return out;
}

void criterion_1(const std::vector<T0Point>& grid, double wall_seconds) {
  const int l = 6;
  int converged = 0;
  double worst = 0.0;
  for (const auto& pt : grid) {
    if (!pt.converged) continue;
    ++converged;
    worst = std::max(worst, std::abs(pt.energy - pt.reference));
  }
  const bool tol_ok = worst <= 1e-4 * l;
  const bool conv_ok =
      converged >= static_cast<int>(std::ceil(0.95 * grid.size()));
  const bool time_ok = wall_seconds <= 600.0;
  report(1, tol_ok && conv_ok && time_ok,
         fmt("t=0 exactness: %d/%zu converged, max |dE| = %.2e (tol %.1e), "
             "wall %.1f s (limit 600)",
             converged, grid.size(), worst, 1e-4 * l, wall_seconds));
}

void criterion_2(const std::vector<T0Point>& grid) {
  // analytic branch switch: SDW branch (V*L) minimizes strictly below
  // V = 0.5, CDW branch (U*L/2) strictly above, equal at the crossing
  const int l = 6;
  bool branch_ok = true;
  for (const auto& pt : grid) {
    const double cdw = 1.0 * l / 2.0, sdw = pt.v * l;
    if (pt.v < 0.5 - 1e-12) branch_ok &= (sdw < cdw);
    if (pt.v > 0.5 + 1e-12) branch_ok &= (cdw < sdw);
    if (std::abs(pt.v - 0.5) <= 1e-12)
      branch_ok &= (std::abs(cdw - sdw) <= 1e-12);
  }

  // numerical kink in the SDP energies at the crossing point
  auto find = [&](double v) -> const T0Point* {
    for (const auto& pt : grid)
      if (std::abs(pt.v - v) < 1e-9) return &pt;
    return nullptr;
  };
  const T0Point* a = find(0.45);
  const T0Point* b = find(0.50);
  const T0Point* c = find(0.55);
  bool kink_ok = false;
  double slope_below = 0, slope_above = 0;
  if (a && b && c) {
    slope_below = (b->energy - a->energy) / 0.05;
    slope_above = (c->energy - b->energy) / 0.05;
    kink_ok = std::abs(slope_below - slope_above) > l / 2.0;
  }
  report(2, branch_ok && kink_ok,
         fmt("crossing at V=0.5: analytic branch switch %s, dE/dV %.3f -> "
             "%.3f across the crossing",
             branch_ok ? "exact" : "WRONG", slope_below, slope_above));
}

void criterion_3() {
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> coupling(-2.0, 2.0);
  double worst = 0.0;
  int checked = 0;
  while (checked < 20) {
    const int l = 2 + static_cast<int>(rng() % 3);
    const int nu = 1 + static_cast<int>(rng() % l);
    const int nd = 1 + static_cast<int>(rng() % l);
    if (nu + nd < 2) continue;
    LatticeSpec spec{l, (checked % 2) ? Boundary::open : Boundary::periodic,
                     nu, nd};
    auto op = build_extended_hubbard(
        spec, {coupling(rng), coupling(rng), coupling(rng)});
    FockBasis basis(l, nu, nd);
    Eigen::MatrixXd h = dense_hamiltonian(op, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const int k = static_cast<int>(rng() % basis.size());
    Wavefunction psi{&basis, es.eigenvectors().col(k)};

    const int r = basis.rank(), n = basis.n_total();
    Eigen::MatrixXd d2 = extract_D2(psi);
    worst = std::max(
        worst,
        (map_D_to_Q(r, n).apply(d2) - extract_Q2(psi)).cwiseAbs().maxCoeff());
    worst = std::max(
        worst,
        (map_D_to_G(r, n).apply(d2) - extract_G2(psi)).cwiseAbs().maxCoeff());
    worst = std::max(
        worst,
        (map_D_to_T2(r, n).apply(d2) - extract_T2(psi)).cwiseAbs().maxCoeff());
    ++checked;
  }
  report(3, worst <= 1e-10,
         fmt("oracle map certification on 20 random eigenstates: max "
             "entrywise defect %.2e (tol 1e-10)",
             worst));
}

struct Fig2Data {
  SweepResult sweep;
  std::vector<double> ratios;
};

Fig2Data run_fig2_grid() {
  ExperimentConfig config = ExperimentConfig::fig2_defaults();
  config.sites = 4;  // oracle-scale lattice for both levels
  config.sites_t2 = 4;
  config.threads = 2;
  config.max_iter = 60000;
  Fig2Data data;
  data.sweep = run_fig2_sweep(config);
  data.ratios = config.u_over_v_grid;

  // Energies from a 1e-6 solve carry a few-times-1e-6 of noise; where that
  // noise alone breaks an ordering inequality on a near-exact point, re-solve
  // that point tighter before judging. Tolerances below stay untouched.
  const std::size_t n = data.ratios.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (int lev = 0; lev < 2; ++lev) {
      SweepRecord& r = data.sweep.records[lev * n + i];
      if (r.status != "converged") continue;
      const double slack = 1e-6 * (1.0 + std::abs(r.energy_ref));
      if (r.error >= -slack) continue;
      std::printf("  .. re-solving U/V=%g %s at eps=2.5e-7\n", r.u_over_v,
                  r.level.c_str());
      std::fflush(stdout);
      V2rdmOptions opts;
      opts.solver.eps = 2.5e-7;
      opts.solver.max_iter = 150000;
      const ConditionLevel level =
          lev == 0 ? ConditionLevel::TwoPos : ConditionLevel::TwoPosT2;
      V2rdmResult res = solve(LatticeSpec::half_filled(r.sites),
                              {r.t, r.u, r.v}, level, opts);
      if (res.status == SolveStatus::converged) {
        r.energy_sdp = res.energy;
        r.error = r.energy_ref - res.energy;
        r.gap = res.gap;
        r.iters = res.iterations;
      }
    }
  }
  return data;
}

void criterion_4(const Fig2Data& data) {
  // records: all TwoPos points first, then all TwoPosT2 points, grid order
  const auto& rec = data.sweep.records;
  const std::size_t n = data.ratios.size();
  bool ok = true;
  int used = 0;
  double worst_mono = -1e300, worst_lb = -1e300;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& two = rec[i];
    const auto& t2 = rec[n + i];
    if (two.status != "converged" || t2.status != "converged") continue;
    ++used;
    const double e_exact = two.energy_ref;
    const double lb_slack = 1e-6 * (1.0 + std::abs(e_exact));
    ok &= two.energy_sdp <= t2.energy_sdp + 1e-6;
    ok &= t2.energy_sdp <= e_exact + lb_slack;
    ok &= two.energy_sdp <= e_exact + lb_slack;
    worst_mono = std::max(worst_mono, two.energy_sdp - t2.energy_sdp);
    worst_lb = std::max(worst_lb, t2.energy_sdp - e_exact);
  }
  report(4, ok && used > 0,
         fmt("lower bound and monotonicity on the t=U=1 grid (L=4): %d/%zu "
             "pairs converged, worst monotonicity slack %.2e (<= 1e-6), worst "
             "bound overshoot %.2e (<= 1e-6 relative)",
             used, n, worst_mono, worst_lb));
}

void criterion_5(const Fig2Data& data) {
  const auto& rec = data.sweep.records;
  const std::size_t n = data.ratios.size();
  double low_sum[2] = {0, 0}, high_sum[2] = {0, 0};
  int low_cnt[2] = {0, 0}, high_cnt[2] = {0, 0};
  bool t2_tighter = true;
  int tighter_checked = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = data.ratios[i];
    for (int lev = 0; lev < 2; ++lev) {
      const auto& r = rec[lev * n + i];
      if (r.status != "converged") continue;
      const double err = std::abs(r.error);
      if (ratio >= 0.5 - 1e-9 && ratio <= 1.5 + 1e-9) {
        low_sum[lev] += err;
        ++low_cnt[lev];
      }
      if (ratio >= 2.5 - 1e-9 && ratio <= 4.0 + 1e-9) {
        high_sum[lev] += err;
        ++high_cnt[lev];
      }
    }
    if (ratio < 2.0 - 1e-9) {
      const auto& two = rec[i];
      const auto& t2 = rec[n + i];
      if (two.status == "converged" && t2.status == "converged") {
        ++tighter_checked;
        t2_tighter &= std::abs(t2.error) < std::abs(two.error);
      }
    }
  }
  bool kink = true;
  double mean_low[2], mean_high[2];
  for (int lev = 0; lev < 2; ++lev) {
    mean_low[lev] = low_cnt[lev] ? low_sum[lev] / low_cnt[lev] : 1e300;
    mean_high[lev] = high_cnt[lev] ? high_sum[lev] / high_cnt[lev] : -1e300;
    kink &= mean_high[lev] > mean_low[lev];
  }
  report(5, kink && t2_tighter && tighter_checked > 0,
         fmt("error kink: mean |err| U/V>2.5 vs U/V<1.5 = %.2e/%.2e (2pos), "
             "%.2e/%.2e (T2); T2 tighter at all %d converged U/V<2 points: %s",
             mean_high[0], mean_low[0], mean_high[1], mean_low[1],
             tighter_checked, t2_tighter ? "yes" : "no"));
}

void criterion_6(const std::vector<T0Point>& t0, const Fig2Data& fig2) {
  double worst_gap = 0.0;
  for (const auto& pt : t0)
    if (pt.converged) worst_gap = std::max(worst_gap, pt.gap);
  for (const auto& r : fig2.sweep.records)
    if (r.status == "converged") worst_gap = std::max(worst_gap, r.gap);

  bool cert_ok = true;
  double worst_cert = 0.0, worst_beta = 0.0;
  for (const auto& pt : t0) {
    if (!pt.converged) continue;
    cert_ok &= pt.cert_ok;
    worst_cert = std::max(worst_cert, pt.cert_residual / pt.cert_tolerance);
    worst_beta = std::min(worst_beta, pt.beta_min);
  }
  const bool gap_ok = worst_gap <= 1e-5;
  const bool beta_ok = worst_beta >= -1e-9;
  report(6, gap_ok && cert_ok && beta_ok,
         fmt("duality: max relative gap %.2e (tol 1e-5); certificates on the "
             "t=0 grid: worst residual %.2f x tolerance, beta_min %.1e",
             worst_gap, worst_cert, worst_beta));
}

void criterion_7() {
  LatticeSpec spec{2, Boundary::open, 1, 1};
  auto res = solve(spec, {1.0, 4.0, 0.0}, ConditionLevel::TwoPos);
  const double expected = 2.0 - 2.0 * std::sqrt(2.0);
  const double defect = std::abs(res.energy - expected);
  report(7, res.status == SolveStatus::converged && defect <= 1e-5,
         fmt("two-particle exactness: dimer 2-pos energy %.8f vs 2-2sqrt(2) "
             "(defect %.2e, tol 1e-5)",
             res.energy, defect));
}

void criterion_8() {
  // smallest-eigenvalue program
  SdpProblem p;
  p.layout.blocks = {{"X", 3}};
  p.objective = {Eigen::Vector3d(1, 2, 3).asDiagonal()};
  p.constraints.layout = p.layout;
  ConstraintRow row;
  for (int i = 0; i < 3; ++i)
    row.entries.emplace_back(p.layout.coord(0, i, i), 1.0);
  row.rhs = 1.0;
  p.constraints.rows.push_back(row);
  SolverOptions opts;
  opts.eps = 1e-10;
  SdpSolution sol = solve_boundary_point(p, opts);
  const bool toy_ok = sol.status == SolveStatus::converged &&
                      std::abs(sol.objective - 1.0) <= 1e-8;

  // analytic nearest-PSD on 2x2 instances
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = gauss(rng), b = gauss(rng), c = gauss(rng);
    Eigen::MatrixXd m(2, 2);
    m << a, b, b, c;
    const double mean = 0.5 * (a + c);
    const double radius = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    const double lam1 = mean - radius, lam2 = mean + radius;
    Eigen::Vector2d v1, v2;
    if (std::abs(b) < 1e-15) {
      v1 = (a <= c) ? Eigen::Vector2d(1, 0) : Eigen::Vector2d(0, 1);
      v2 = (a <= c) ? Eigen::Vector2d(0, 1) : Eigen::Vector2d(1, 0);
    } else {
      v1 = Eigen::Vector2d(lam1 - c, b).normalized();
      v2 = Eigen::Vector2d(lam2 - c, b).normalized();
    }
    Eigen::MatrixXd analytic = std::max(lam1, 0.0) * v1 * v1.transpose() +
                               std::max(lam2, 0.0) * v2 * v2.transpose();
    worst =
        std::max(worst, (project_psd(m) - analytic).cwiseAbs().maxCoeff());
  }
  report(8, toy_ok && worst <= 1e-12,
         fmt("solver units: toy objective defect %.2e (tol 1e-8), nearest-PSD "
             "max defect %.2e (tol 1e-12)",
             std::abs(sol.objective - 1.0), worst));
}

void criterion_9() {
  ExperimentConfig config = ExperimentConfig::scale_defaults();
  SweepResult result = run_scaling_benchmark(config);
  bool energies_ok = true;
  double worst = 0.0;
  for (const auto& r : result.records) {
    if (r.status != "converged") {
      energies_ok = false;
      continue;
    }
    worst = std::max(worst, std::abs(r.error) / r.sites);
    energies_ok &= std::abs(r.error) <= 1e-4 * r.sites;
  }
  const double slope = result.fit ? result.fit->slope : 0.0;
  const double r2 = result.fit ? result.fit->r_squared : 0.0;
  report(9, energies_ok && result.fit.has_value(),
         fmt("scaling benchmark L in {4..12}: log-log wall-time slope %.2f "
             "(R^2 %.3f, informational); worst |dE|/L = %.2e (tol 1e-4)",
             slope, r2, worst));
}

}  // namespace

int main() {
  std::printf("v2rdm acceptance suite\n");

  double t0_wall = 0.0;
  std::vector<T0Point> t0 = run_t0_grid(&t0_wall);
  criterion_1(t0, t0_wall);
  criterion_2(t0);
  criterion_3();

  Fig2Data fig2 = run_fig2_grid();
  criterion_4(fig2);
  criterion_5(fig2);
  criterion_6(t0, fig2);
  criterion_7();
  criterion_8();
  criterion_9();

  std::printf("%d criterion failure(s)\n", g_failures);
  return g_failures;
}
