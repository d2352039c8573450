#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>

#include "v2rdm/fock_basis.hpp"
#include "v2rdm/op_string.hpp"

namespace v2rdm {

/// Real amplitudes over a FockBasis. The basis must outlive the wavefunction.
struct Wavefunction {
  const FockBasis* basis = nullptr;
  Eigen::VectorXd coeffs;

  double norm() const { return coeffs.norm(); }
  Wavefunction normalized() const {
    Wavefunction out{basis, coeffs / coeffs.norm()};
    return out;
  }
};

/// Apply an operator string to a single determinant. The rightmost factor
/// acts first; the sign is the anticommutation parity (number of occupied
/// orbitals below the acted-on position, accumulated per factor).
/// Returns nothing when the string annihilates the determinant.
std::optional<std::pair<std::uint64_t, int>> apply_string(
    const std::vector<FermiOp>& ops, std::uint64_t det);

/// Matrix-free H|psi> within one sector. Throws std::invalid_argument when a
/// term maps outside the sector of psi's basis.
Wavefunction apply_operator(const SecondQuantizedOperator& op,
                            const Wavefunction& psi);

/// Sparse state over determinant words, for operator strings that leave the
/// (N_up, N_down) sector. Ordered keys keep reductions deterministic.
using SparseState = std::map<std::uint64_t, double>;

/// Apply one operator string to every determinant of psi.
SparseState apply_string_to_state(const std::vector<FermiOp>& ops,
                                  const Wavefunction& psi);

double dot(const SparseState& a, const SparseState& b);

}  // namespace v2rdm
