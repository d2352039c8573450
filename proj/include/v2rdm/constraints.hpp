#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "v2rdm/affine_map.hpp"

namespace v2rdm {

/// Which positivity conditions to impose. An empty set is rejected; t2
/// implies the 2-positivity blocks.
struct ConditionSet {
  bool two_pos = false;
  bool t2 = false;
  bool empty() const { return !two_pos && !t2; }
};

struct BlockInfo {
  std::string name;
  int dim;
};

/// Block-diagonal layout of the primal variable, with svec (packed symmetric,
/// off-diagonals scaled by sqrt(2)) coordinate bookkeeping.
struct BlockLayout {
  std::vector<BlockInfo> blocks;

  int block_index(const std::string& name) const;
  int svec_dim(int b) const {
    const int d = blocks[b].dim;
    return d * (d + 1) / 2;
  }
  int svec_offset(int b) const;
  int total_svec_dim() const;
  /// Global svec coordinate of entry (i <= j) of block b.
  int coord(int b, int i, int j) const;
};

/// One equality row: sum of svec coefficients = rhs.
struct ConstraintRow {
  std::vector<std::pair<int, double>> entries;  // (global svec coord, coeff)
  double rhs = 0.0;
};

/// Sparse affine equality system A(X) = b over a block layout.
struct ConstraintSystem {
  BlockLayout layout;
  std::vector<ConstraintRow> rows;

  int n_rows() const { return static_cast<int>(rows.size()); }

  /// Drop exact-duplicate rows, then rank-check what is left: rows holding a
  /// coordinate no other row touches are peeled off as structurally
  /// independent, the (small) remainder goes through pivoted QR with the
  /// given tolerance. Throws on inconsistent duplicates.
  void remove_redundant(double tol = 1e-10);

  /// Value-space triplet export, one line per nonzero:
  ///   row <r> <block> <i> <j> <coeff>     (coeff multiplies X_block[i,j])
  ///   rhs <r> <value>
  /// preceded by a header naming each block and its dimension.
  void export_triplets(std::ostream& os) const;
};

/// A non-D2 block tied to the D2 block entrywise by an affine map.
struct BlockLink {
  int block;
  AffineMap map;
};

struct ConstraintBuildOptions {
  /// When set, adds one row pinning <S_z> (computed through the 1-RDM
  /// diagonal) to the given value.
  std::optional<double> sz = std::nullopt;
  /// Include D1 and Q1 as primal blocks with their linking rows.
  bool d1q1_blocks = false;
};

/// The assembled system plus the bookkeeping the dual-certificate
/// reconstruction needs: which rows are pure-D2 scalar rows and which maps
/// tie each linked block back to D2.
struct ConstraintBuild {
  ConstraintSystem system;
  std::vector<BlockLink> links;
  int d2_block = 0;
  int trace_row = -1;
  int sz_row = -1;
};

/// Equality rows binding every non-D2 block to its affine image of D2, plus
/// the trace row Tr D2 = N(N-1)/2 and the optional S_z row.
ConstraintBuild build_constraints(int r, int n, const ConditionSet& conditions,
                                  const ConstraintBuildOptions& opts = {});

}  // namespace v2rdm
