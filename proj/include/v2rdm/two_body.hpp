#pragma once

#include <Eigen/Dense>

#include "v2rdm/op_string.hpp"
#include "v2rdm/pair_index.hpp"

namespace v2rdm {

/// Hamiltonian folded onto the packed antisymmetric pair space:
/// E = sum_{PQ} k2(P,Q) * D2(P,Q) for any 2-RDM normalized to
/// Tr D2 = N(N-1)/2. One-body content is absorbed with weight 1/(N-1),
/// which ties the matrix to a fixed particle number.
struct ReducedTwoBodyMatrix {
  PairIndexer pairs;
  int n_particles = 2;
  Eigen::MatrixXd k2;

  double energy(const Eigen::MatrixXd& d2) const {
    return k2.cwiseProduct(d2).sum();
  }
};

/// Fold an operator with at most two-body content into pair-space form.
/// Throws if N < 2 or if any term normal-orders to rank three or higher
/// (odd-length strings surface here as unbalanced monomials).
ReducedTwoBodyMatrix reduce_to_two_body(const SecondQuantizedOperator& op,
                                        int n_particles);

}  // namespace v2rdm
