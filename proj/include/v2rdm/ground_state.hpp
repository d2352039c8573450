#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "v2rdm/wavefunction.hpp"

namespace v2rdm {

struct EigensolverOptions {
  int dense_cutoff = 2000;    // dense below, Lanczos above
  int lanczos_max_iter = 500;
  double lanczos_tol = 1e-10;
  std::uint64_t seed = 0x2545F4914F6CDD1Dull;
};

struct GroundStateResult {
  double energy = 0.0;
  Wavefunction psi;
  bool converged = true;
  int iterations = 0;      // Lanczos steps (0 on the dense path)
  double residual = 0.0;   // ||H x - E x|| of the returned vector
};

/// Dense sector Hamiltonian, built column by column with the matrix-free
/// apply. Intended for tests and small sectors.
Eigen::MatrixXd dense_hamiltonian(const SecondQuantizedOperator& op,
                                  const FockBasis& basis);

/// Lowest eigenpair of a sector-preserving operator. Dense solve up to
/// dense_cutoff, Lanczos with full reorthogonalization above. Degenerate
/// ground spaces return an arbitrary member. Non-convergence is reported via
/// converged/residual, not thrown.
GroundStateResult ground_state(const SecondQuantizedOperator& op,
                               const FockBasis& basis,
                               const EigensolverOptions& opts = {});

}  // namespace v2rdm
