#include "v2rdm/v2rdm.hpp"

#include <stdexcept>

namespace v2rdm {

const char* to_string(ConditionLevel level) {
  switch (level) {
    case ConditionLevel::TwoPos: return "2pos";
    case ConditionLevel::TwoPosT2: return "2pos_t2";
  }
  return "unknown";
}

V2rdmAssembly assemble(const LatticeSpec& spec, const HubbardParams& params,
                       ConditionLevel level, const V2rdmOptions& opts) {
  spec.validate();
  const int n = spec.n_total();
  if (n < 2)
    throw std::invalid_argument("v2rdm::assemble: need at least two particles");

  V2rdmAssembly a;
  a.spec = spec;
  a.params = params;
  a.level = level;

  const SecondQuantizedOperator h = build_extended_hubbard(spec, params);
  a.k2 = reduce_to_two_body(h, n);

  ConditionSet conditions;
  conditions.two_pos = true;
  conditions.t2 = (level == ConditionLevel::TwoPosT2);

  ConstraintBuildOptions copts;
  if (opts.sz_row) copts.sz = 0.5 * (spec.n_up - spec.n_down);
  copts.d1q1_blocks = opts.d1q1_blocks;

  ConstraintBuild build = build_constraints(spec.rank(), n, conditions, copts);
  a.links = std::move(build.links);
  a.d2_block = build.d2_block;
  a.trace_row = build.trace_row;
  a.sz_row = build.sz_row;

  a.problem.layout = build.system.layout;
  a.problem.constraints = std::move(build.system);
  a.problem.objective.resize(a.problem.layout.blocks.size());
  for (std::size_t b = 0; b < a.problem.layout.blocks.size(); ++b) {
    const int d = a.problem.layout.blocks[b].dim;
    a.problem.objective[b] = Eigen::MatrixXd::Zero(d, d);
  }
  a.problem.objective[a.d2_block] = a.k2.k2;
  return a;
}

V2rdmResult solve(const V2rdmAssembly& assembly, const SolverOptions& opts) {
  SolverOptions solver_opts = opts;
  if (!solver_opts.x0.has_value()) {
    // start from the maximally mixed D2 and its images under the maps
    const auto& layout = assembly.problem.layout;
    const int pdim = layout.blocks[assembly.d2_block].dim;
    const int n = assembly.spec.n_total();
    std::vector<Eigen::MatrixXd> x0(layout.blocks.size());
    for (std::size_t b = 0; b < layout.blocks.size(); ++b)
      x0[b] = Eigen::MatrixXd::Zero(layout.blocks[b].dim, layout.blocks[b].dim);
    x0[assembly.d2_block] = (n * (n - 1) / 2.0 / pdim) *
                            Eigen::MatrixXd::Identity(pdim, pdim);
    for (const auto& link : assembly.links)
      x0[link.block] = link.map.apply(x0[assembly.d2_block]);
    solver_opts.x0 = std::move(x0);
  }

  SdpSolution sol = solve_boundary_point(assembly.problem, solver_opts);

  V2rdmResult res;
  res.level = assembly.level;
  res.d2 = sol.x[assembly.d2_block];
  res.energy = assembly.k2.energy(res.d2);
  res.complementarity = res.energy - sol.dual_objective;
  res.primal_inf = sol.primal_inf;
  res.dual_inf = sol.dual_inf;
  res.gap = sol.gap;
  res.iterations = sol.iterations;
  res.status = sol.status;
  for (std::size_t b = 0; b < assembly.problem.layout.blocks.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.x[b],
                                                      Eigen::EigenvaluesOnly);
    res.block_min_eig[assembly.problem.layout.blocks[b].name] =
        es.eigenvalues()[0];
  }
  res.solution = std::move(sol);
  return res;
}

V2rdmResult solve(const LatticeSpec& spec, const HubbardParams& params,
                  ConditionLevel level, const V2rdmOptions& opts) {
  return solve(assemble(spec, params, level, opts), opts.solver);
}

DualCertificate dual_certificate(const SdpProblem& problem,
                                 const SdpSolution& sol,
                                 const std::vector<BlockLink>& links,
                                 int objective_block, double tol_factor,
                                 double beta_cut) {
  const BlockLayout& lay = problem.layout;
  const int obj_lo = lay.svec_offset(objective_block);
  const int obj_hi = obj_lo + lay.svec_dim(objective_block);
  const int d_obj = lay.blocks[objective_block].dim;

  // Scalar rows live entirely on the objective block; their y-weighted
  // matrices shift the objective. Everything else is a linking row whose
  // dual content is carried by the linked block's Z through the map adjoint.
  Eigen::MatrixXd target = problem.objective[objective_block];
  for (int r = 0; r < problem.constraints.n_rows(); ++r) {
    const auto& row = problem.constraints.rows[r];
    bool on_obj = true;
    for (const auto& [coord, v] : row.entries) {
      (void)v;
      if (coord < obj_lo || coord >= obj_hi) {
        on_obj = false;
        break;
      }
    }
    if (!on_obj) continue;
    for (const auto& [coord, alpha] : row.entries) {
      int local = coord - obj_lo;
      int i = 0;
      while (local >= d_obj - i) {
        local -= d_obj - i;
        ++i;
      }
      const int j = i + local;
      if (i == j) {
        target(i, i) -= alpha * sol.y[r];
      } else {
        const double v = alpha / 1.4142135623730951 * sol.y[r];
        target(i, j) -= v;
        target(j, i) -= v;
      }
    }
  }

  Eigen::MatrixXd recon = sol.z[objective_block];
  for (const auto& link : links)
    recon += link.map.adjoint_apply(sol.z[link.block]);

  DualCertificate cert;
  cert.residual = (target - recon).norm();
  cert.tolerance =
      tol_factor * std::max(1e-12, problem.objective[objective_block].norm());
  cert.within_tolerance = cert.residual <= cert.tolerance;

  // factors from every dual slack block
  double beta_max = 0.0;
  std::vector<std::pair<int, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>>> eigs;
  cert.beta_min = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < sol.z.size(); ++b) {
    eigs.emplace_back(static_cast<int>(b),
                      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sol.z[b]));
    const auto& lam = eigs.back().second.eigenvalues();
    if (lam.size() > 0) {
      beta_max = std::max(beta_max, lam.maxCoeff());
      cert.beta_min = std::min(cert.beta_min, lam.minCoeff());
    }
  }
  for (const auto& [b, es] : eigs) {
    const auto& lam = es.eigenvalues();
    for (int k = 0; k < lam.size(); ++k) {
      if (lam[k] > beta_cut * beta_max) {
        cert.factors.push_back(
            {lay.blocks[b].name, lam[k], es.eigenvectors().col(k)});
      }
    }
  }

  double total = 0.0;
  for (std::size_t b = 0; b < sol.z.size(); ++b) {
    const double tr = sol.z[b].cwiseProduct(sol.x[b]).sum();
    cert.block_complementarity[lay.blocks[b].name] = tr;
    total += tr;
  }
  cert.total_complementarity = total;
  return cert;
}

DualCertificate dual_certificate(const V2rdmAssembly& assembly,
                                 const SdpSolution& sol, double tol_factor) {
  return dual_certificate(assembly.problem, sol, assembly.links,
                          assembly.d2_block, tol_factor);
}

}  // namespace v2rdm
