#pragma once

#include <map>
#include <string>

#include "v2rdm/lattice.hpp"
#include "v2rdm/sdp.hpp"
#include "v2rdm/two_body.hpp"

namespace v2rdm {

/// Positivity level of the variational program: 2-positivity (D2/Q2/G2) or
/// 2-positivity plus the partial-3-positivity T2 block.
enum class ConditionLevel { TwoPos, TwoPosT2 };

const char* to_string(ConditionLevel level);

struct V2rdmOptions {
  SolverOptions solver;
  /// Pin <S_z> to the sector value (N_up - N_down)/2.
  bool sz_row = true;
  /// Carry D1/Q1 as explicit primal blocks (diagnostic; off by default).
  bool d1q1_blocks = false;
};

/// Assembled program plus the bookkeeping needed for certificates.
struct V2rdmAssembly {
  SdpProblem problem;
  ReducedTwoBodyMatrix k2;
  std::vector<BlockLink> links;
  int d2_block = 0;
  int trace_row = -1;
  int sz_row = -1;
  LatticeSpec spec;
  HubbardParams params;
  ConditionLevel level = ConditionLevel::TwoPos;
};

V2rdmAssembly assemble(const LatticeSpec& spec, const HubbardParams& params,
                       ConditionLevel level, const V2rdmOptions& opts = {});

struct V2rdmResult {
  double energy = 0.0;  // Tr(K2 D2*), the variational lower bound
  Eigen::MatrixXd d2;
  std::map<std::string, double> block_min_eig;
  /// Tr(K2 D2*) - b^T y: the complementarity defect, zero at optimality.
  double complementarity = 0.0;
  double primal_inf = 0.0, dual_inf = 0.0, gap = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
  ConditionLevel level = ConditionLevel::TwoPos;
  SdpSolution solution;
};

V2rdmResult solve(const V2rdmAssembly& assembly, const SolverOptions& opts);
V2rdmResult solve(const LatticeSpec& spec, const HubbardParams& params,
                  ConditionLevel level, const V2rdmOptions& opts = {});

/// One rank-one factor beta * v v^T of a dual slack block; v encodes a
/// two-body (or, on the T2 block, three-body) operator polynomial in the
/// block's packed basis.
struct CertificateFactor {
  std::string block;
  double beta;
  Eigen::VectorXd vec;
};

/// Decomposition of the shifted Hamiltonian over the dual slack blocks.
/// The matrix identity checked on the D2 representation is
///   K2 - y_trace * I - y_sz * W_sz = Z_D2 + sum_B M_B^T(Z_B) + R
/// where M_B^T is the adjoint of block B's affine map and W_sz the S_z row
/// matrix; `residual` is ||R||_F. With the dual objective absorbed into the
/// scalar rows, this is the convex-combination form of the optimality
/// certificate, and beta_i >= 0 up to the solver's noise floor.
struct DualCertificate {
  std::vector<CertificateFactor> factors;
  double residual = 0.0;
  double tolerance = 0.0;  // 1e-4 * ||K2||_F by default
  bool within_tolerance = false;
  double beta_min = 0.0;
  std::map<std::string, double> block_complementarity;  // Tr(Z_b X_b)
  double total_complementarity = 0.0;
};

/// Generic reconstruction over any problem whose non-objective blocks are
/// tied to the objective block by affine maps; rows not accounted for by the
/// links must live entirely on the objective block.
DualCertificate dual_certificate(const SdpProblem& problem,
                                 const SdpSolution& sol,
                                 const std::vector<BlockLink>& links,
                                 int objective_block, double tol_factor = 1e-4,
                                 double beta_cut = 1e-8);

DualCertificate dual_certificate(const V2rdmAssembly& assembly,
                                 const SdpSolution& sol,
                                 double tol_factor = 1e-4);

}  // namespace v2rdm
