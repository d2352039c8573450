#pragma once

#include <utility>
#include <vector>

#include "v2rdm/op_string.hpp"

namespace v2rdm {

enum class Boundary { periodic, open };

/// One-dimensional chain of L sites with a fixed (N_up, N_down) filling.
///
/// Spin-orbital convention used everywhere in this project:
/// orbital index = 2*site + spin, spin 0 = up, 1 = down, rank r = 2L.
struct LatticeSpec {
  int sites = 0;
  Boundary boundary = Boundary::periodic;
  int n_up = 0;
  int n_down = 0;

  int rank() const { return 2 * sites; }
  int n_total() const { return n_up + n_down; }

  /// Throws std::invalid_argument on L < 2 or inconsistent fillings.
  void validate() const;

  /// Unordered nearest-neighbor pairs, each exactly once. A periodic chain
  /// with L = 2 degenerates to the single bond (0, 1).
  std::vector<std::pair<int, int>> bonds() const;

  /// Half filling with N_up = N_down = L/2.
  static LatticeSpec half_filled(int sites, Boundary b = Boundary::periodic);
};

inline int orbital_of(int site, int spin) { return 2 * site + spin; }
inline int site_of(int orbital) { return orbital / 2; }
inline int spin_of(int orbital) { return orbital % 2; }

/// Extended Hubbard couplings: hopping t, on-site repulsion U,
/// nearest-neighbor repulsion V. No sign restrictions.
struct HubbardParams {
  double t = 0.0;
  double u = 0.0;
  double v = 0.0;
  void validate() const;  // throws on non-finite values
};

/// H = -t sum_{<i,j>,s} (a+_{is} a_{js} + h.c.)
///   +  U sum_i n_{iu} n_{id}
///   +  V sum_{<i,j>,s,s'} n_{is} n_{js'}
/// with each unordered bond counted once in the hopping and V sums.
/// Terms with zero coefficient are omitted.
SecondQuantizedOperator build_extended_hubbard(const LatticeSpec& spec,
                                               const HubbardParams& params);

/// Ground-state energy of the half-filled chain at t = 0:
/// U*L/2 on the charge-density-wave side (U < 2V), V*L on the
/// spin-density-wave side (U > 2V), their common value at U = 2V.
/// Requires even L. The V*L branch counts one bond per site, so the value
/// applies to periodic chains with L >= 4 (an L = 2 ring has a single bond).
double analytic_t0_energy(int sites, double u, double v);

}  // namespace v2rdm
