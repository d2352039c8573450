#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

#include "v2rdm/constraints.hpp"

namespace v2rdm {

/// min <C, X>  s.t.  A(X) = b,  X >= 0 blockwise.
struct SdpProblem {
  BlockLayout layout;
  std::vector<Eigen::MatrixXd> objective;  // one symmetric matrix per block
  ConstraintSystem constraints;

  void validate() const;  // throws on shape or symmetry violations
};

struct SolverOptions {
  double eps = 1e-6;        // primal, dual and gap tolerance (relative)
  int max_iter = 20000;
  double mu0 = 1.0;         // initial penalty
  double mu_min = 1e-6;
  double mu_max = 1e6;
  double mu_factor = 1.1;   // applied when the residual ratio exceeds mu_ratio
  double mu_ratio = 10.0;
  /// Every this many iterations the penalty is rescaled by
  /// sqrt(primal/dual) (clamped to one decade) to re-center the 1.1-step
  /// rule; 0 disables.
  int mu_rebalance_every = 200;
  int check_every = 25;     // convergence test cadence
  std::ostream* log = nullptr;
  int log_every = 25;
  /// Optional starting multiplier estimate (one matrix per block).
  std::optional<std::vector<Eigen::MatrixXd>> x0 = std::nullopt;
};

enum class SolveStatus { converged, maxiter };

const char* to_string(SolveStatus s);

struct SdpSolution {
  std::vector<Eigen::MatrixXd> x;  // primal blocks, original units
  std::vector<Eigen::MatrixXd> z;  // dual slack blocks, original units
  Eigen::VectorXd y;               // one multiplier per constraint row
  double objective = 0.0;          // <C, X>
  double dual_objective = 0.0;     // b^T y
  double primal_inf = 0.0;         // recomputed, never taken from the loop
  double dual_inf = 0.0;
  double gap = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
};

/// Frobenius-nearest positive semidefinite matrix: symmetrize, eigendecompose,
/// clip negative eigenvalues to zero.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);

/// First-order boundary-point solver. Each iteration solves the normal
/// equations A A^T y = A(C - Z) + (b - A(X))/mu against a Cholesky
/// factorization computed once, then splits W = C - A^T(y) - X/mu into its
/// positive part (the new Z) and mu times its negative part (the new X).
/// Rows of A are normalized to unit 2-norm and C by its largest entry;
/// results are reported in original units. Deterministic for fixed inputs.
SdpSolution solve_boundary_point(const SdpProblem& problem,
                                 const SolverOptions& opts = {});

struct ResidualTriplet {
  double primal_inf;  // ||A(X) - b|| / (1 + ||b||)
  double dual_inf;    // ||C - A^T(y) - Z||_F / (1 + ||C||_F)
  double gap;         // |<C,X> - b^T y| / (1 + |<C,X>| + |b^T y|)
};

/// Residuals of a returned solution, recomputed from scratch in the
/// (unscaled) data of the problem.
ResidualTriplet residuals(const SdpProblem& problem, const SdpSolution& sol);

/// svec packing of a symmetric matrix: diagonal entries unchanged,
/// off-diagonals scaled by sqrt(2); inner products and Frobenius norms are
/// preserved. Layout matches BlockLayout::coord.
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int dim);

/// Text dump / load of a problem (block layout, objective, constraint
/// triplets in value space).
void dump_problem(std::ostream& os, const SdpProblem& problem);
SdpProblem load_problem(std::istream& is);

}  // namespace v2rdm
