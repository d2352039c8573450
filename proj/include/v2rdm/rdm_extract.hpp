#pragma once

#include <Eigen/Dense>

#include "v2rdm/pair_index.hpp"
#include "v2rdm/wavefunction.hpp"

namespace v2rdm {

/// Metric matrices of one state, extracted directly from the wavefunction.
///
/// Index conventions (r = 2L spin orbitals):
///   d2, q2  : packed pairs i < j, dimension r(r-1)/2
///   g2      : ordered pairs (i, j), dimension r^2
///   e3, f3, t2 : triples (i < j; k), dimension r * r(r-1)/2
/// All are real symmetric; each is a Gram matrix (or a sum of two), so each
/// is positive semidefinite for any normalized state.
struct MetricMatrices {
  Eigen::MatrixXd d2, q2, g2, e3, f3, t2;
};

/// D2[(ij),(kl)] = <psi| a+_i a+_j a_l a_k |psi>
Eigen::MatrixXd extract_D2(const Wavefunction& psi);

/// Q2[(ij),(kl)] = <psi| a_i a_j a+_l a+_k |psi>
Eigen::MatrixXd extract_Q2(const Wavefunction& psi);

/// G2[(ij),(kl)] = <psi| a+_i a_j a+_l a_k |psi>
Eigen::MatrixXd extract_G2(const Wavefunction& psi);

/// E3[(ij;k),(lm;n)] = <psi| a+_i a+_j a_k a+_n a_m a_l |psi>
/// (two particles and a hole)
Eigen::MatrixXd extract_E3(const Wavefunction& psi);

/// F3[(ij;k),(lm;n)] = <psi| a+_n a_m a_l a+_i a+_j a_k |psi>
/// (two holes and a particle)
Eigen::MatrixXd extract_F3(const Wavefunction& psi);

/// T2 = E3 + F3; the three-body content of the two addends cancels, which is
/// what makes this constraint expressible through the 2-RDM.
Eigen::MatrixXd extract_T2(const Wavefunction& psi);

/// D1[p][q] = <psi| a+_p a_q |psi>
Eigen::MatrixXd extract_1rdm(const Wavefunction& psi);

MetricMatrices extract_all(const Wavefunction& psi, bool with_t2 = true);

}  // namespace v2rdm
