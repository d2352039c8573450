#pragma once

#include <Eigen/Dense>
#include <vector>

#include "v2rdm/pair_index.hpp"

namespace v2rdm {

/// One coefficient of the linear part of a map entry: `value` multiplies the
/// packed 2-RDM element at (row, col), row <= col, counted once (the matrix
/// is symmetric and the coefficient refers to the matrix value, not to the
/// two storage positions).
struct LinearCoeff {
  int row;
  int col;
  double value;
};

/// Affine expression for one output matrix element.
struct MapEntry {
  std::vector<LinearCoeff> lin;
  double constant = 0.0;
};

/// Affine function from the packed 2-RDM onto another metric block at fixed
/// particle number: out = L(D2) + const. Entries are stored for the upper
/// triangle only; outputs are symmetric by construction.
///
/// Every map here is derived at build time by normal-ordering the defining
/// operator strings with the canonical anticommutation relations; the
/// certification that the derivation is right is numerical, against matrices
/// extracted directly from exact wavefunctions.
class AffineMap {
 public:
  AffineMap(int out_dim, int d2_dim);

  int out_dim() const { return out_dim_; }
  int d2_dim() const { return d2_dim_; }

  MapEntry& entry(int i, int j);              // i <= j
  const MapEntry& entry(int i, int j) const;  // i <= j

  /// Evaluate the map on a packed 2-RDM.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& d2) const;

  /// Adjoint with respect to the Frobenius inner product: returns the packed
  /// symmetric matrix W such that <W, D2>_F = <Y, L(D2)>_F for all D2.
  Eigen::MatrixXd adjoint_apply(const Eigen::MatrixXd& y) const;

 private:
  int out_dim_, d2_dim_;
  std::vector<MapEntry> entries_;  // upper triangle, row-major
};

/// 1-RDM contraction: D1^p_q = (1/(N-1)) sum_m D2^{pm}_{qm}; Tr D1 = N.
AffineMap map_D_to_1rdm(int r, int n);

/// Hole 1-RDM: Q1^p_q = delta_pq - D1^p_q.
AffineMap map_D_to_Q1(int r, int n);

/// Two-hole RDM Q2 on packed pairs as an affine image of D2.
AffineMap map_D_to_Q(int r, int n);

/// Particle-hole RDM G2 on ordered pairs as an affine image of D2.
AffineMap map_D_to_G(int r, int n);

/// T2 = E3 + F3 on triples (i < j; k). The three-body monomials generated by
/// the two orderings cancel identically; the builder verifies the
/// cancellation and throws if any survive.
AffineMap map_D_to_T2(int r, int n);

}  // namespace v2rdm
