#include "v2rdm/constraints.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "v2rdm/lattice.hpp"

namespace v2rdm {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

int BlockLayout::block_index(const std::string& name) const {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].name == name) return static_cast<int>(b);
  throw std::out_of_range("BlockLayout: unknown block " + name);
}

int BlockLayout::svec_offset(int b) const {
  int off = 0;
  for (int k = 0; k < b; ++k) off += svec_dim(k);
  return off;
}

int BlockLayout::total_svec_dim() const {
  return svec_offset(static_cast<int>(blocks.size()));
}

int BlockLayout::coord(int b, int i, int j) const {
  const int d = blocks[b].dim;
  if (i > j) std::swap(i, j);
  return svec_offset(b) + i * d - i * (i - 1) / 2 - i + j;
}

void ConstraintSystem::remove_redundant(double tol) {
  // exact duplicates (same sorted entry list)
  std::map<std::vector<std::pair<int, double>>, double> seen;
  std::vector<ConstraintRow> kept;
  kept.reserve(rows.size());
  for (auto& row : rows) {
    std::sort(row.entries.begin(), row.entries.end());
    auto it = seen.find(row.entries);
    if (it != seen.end()) {
      if (std::abs(it->second - row.rhs) > tol)
        throw std::invalid_argument(
            "ConstraintSystem: duplicate rows with conflicting right-hand sides");
      continue;
    }
    seen.emplace(row.entries, row.rhs);
    kept.push_back(std::move(row));
  }
  rows = std::move(kept);

  // peel rows that own a coordinate nobody else touches
  std::unordered_map<int, int> coord_count;
  for (const auto& row : rows)
    for (const auto& [c, v] : row.entries)
      if (v != 0.0) ++coord_count[c];

  std::vector<bool> peeled(rows.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t rix = 0; rix < rows.size(); ++rix) {
      if (peeled[rix]) continue;
      bool unique_coord = false;
      for (const auto& [c, v] : rows[rix].entries)
        if (v != 0.0 && coord_count[c] == 1) {
          unique_coord = true;
          break;
        }
      if (unique_coord) {
        peeled[rix] = true;
        changed = true;
        for (const auto& [c, v] : rows[rix].entries)
          if (v != 0.0) --coord_count[c];
      }
    }
  }

  std::vector<std::size_t> residual;
  for (std::size_t rix = 0; rix < rows.size(); ++rix)
    if (!peeled[rix]) residual.push_back(rix);
  if (residual.empty()) return;
  if (residual.size() > 4096)
    throw std::runtime_error(
        "ConstraintSystem: residual rank check too large; system is not in "
        "pivoted form");

  // dense pivoted QR over the coordinates the residual rows touch
  std::map<int, int> col_of;
  for (auto rix : residual)
    for (const auto& [c, v] : rows[rix].entries)
      if (v != 0.0) col_of.emplace(c, 0);
  int ncol = 0;
  for (auto& [c, idx] : col_of) idx = ncol++;

  Eigen::MatrixXd m(residual.size(), ncol);
  m.setZero();
  for (std::size_t k = 0; k < residual.size(); ++k)
    for (const auto& [c, v] : rows[residual[k]].entries) m(k, col_of[c]) += v;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.transpose());
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  if (rank == static_cast<int>(residual.size())) return;

  // drop rows outside the pivot set
  std::vector<bool> keep_residual(residual.size(), false);
  for (int k = 0; k < rank; ++k)
    keep_residual[qr.colsPermutation().indices()[k]] = true;
  std::vector<ConstraintRow> final_rows;
  final_rows.reserve(rows.size());
  std::size_t ri = 0;
  for (std::size_t rix = 0; rix < rows.size(); ++rix) {
    if (peeled[rix]) {
      final_rows.push_back(std::move(rows[rix]));
    } else {
      if (keep_residual[ri]) final_rows.push_back(std::move(rows[rix]));
      ++ri;
    }
  }
  rows = std::move(final_rows);
}

void ConstraintSystem::export_triplets(std::ostream& os) const {
  os << "# v2rdm constraint system, triplet format v1\n";
  os << "# blocks:";
  for (const auto& b : layout.blocks) os << " " << b.name << ":" << b.dim;
  os << "\n# row <r> <block> <i> <j> <coeff>  |  rhs <r> <value>\n";
  char buf[128];
  for (int r = 0; r < n_rows(); ++r) {
    for (const auto& [coord, alpha] : rows[r].entries) {
      // locate block and (i, j) from the global svec coordinate
      int b = 0;
      while (coord >= layout.svec_offset(b + 1)) ++b;
      int local = coord - layout.svec_offset(b);
      const int d = layout.blocks[b].dim;
      int i = 0;
      while (local >= d - i) {
        local -= d - i;
        ++i;
      }
      const int j = i + local;
      const double value = (i == j) ? alpha : alpha * kSqrt2;
      std::snprintf(buf, sizeof(buf), "row %d %s %d %d %.17g\n", r,
                    layout.blocks[b].name.c_str(), i, j, value);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "rhs %d %.17g\n", r, rows[r].rhs);
    os << buf;
  }
}

namespace {

// Append the rows "X_B[i,j] - map(D2)[i,j] = const" for one linked block.
void append_link_rows(ConstraintSystem& sys, int block, const AffineMap& map,
                      int d2_block) {
  const BlockLayout& lay = sys.layout;
  for (int i = 0; i < map.out_dim(); ++i) {
    for (int j = i; j < map.out_dim(); ++j) {
      const MapEntry& e = map.entry(i, j);
      ConstraintRow row;
      row.entries.reserve(e.lin.size() + 1);
      row.entries.emplace_back(lay.coord(block, i, j), i == j ? 1.0 : 1.0 / kSqrt2);
      for (const auto& c : e.lin) {
        const double alpha = (c.row == c.col) ? -c.value : -c.value / kSqrt2;
        row.entries.emplace_back(lay.coord(d2_block, c.row, c.col), alpha);
      }
      row.rhs = e.constant;
      sys.rows.push_back(std::move(row));
    }
  }
}

}  // namespace

ConstraintBuild build_constraints(int r, int n, const ConditionSet& conditions,
                                  const ConstraintBuildOptions& opts) {
  if (conditions.empty())
    throw std::invalid_argument("build_constraints: empty condition set");
  if (r < 2 || n < 2)
    throw std::invalid_argument("build_constraints: need r >= 2 and N >= 2");

  const PairIndexer pairs(r);
  const int pdim = pairs.dim();

  ConstraintBuild out;
  BlockLayout& lay = out.system.layout;
  lay.blocks.push_back({"D2", pdim});
  lay.blocks.push_back({"Q2", pdim});
  lay.blocks.push_back({"G2", r * r});
  if (conditions.t2) lay.blocks.push_back({"T2", pdim * r});
  if (opts.d1q1_blocks) {
    lay.blocks.push_back({"D1", r});
    lay.blocks.push_back({"Q1", r});
  }
  out.d2_block = lay.block_index("D2");

  // trace row: Tr D2 = N(N-1)/2
  {
    ConstraintRow row;
    for (int p = 0; p < pdim; ++p)
      row.entries.emplace_back(lay.coord(out.d2_block, p, p), 1.0);
    row.rhs = n * (n - 1) / 2.0;
    out.trace_row = 0;
    out.system.rows.push_back(std::move(row));
  }

  // optional S_z row: sum_p s_p D1^p_p with s_p = +-1/2, through the
  // contraction, lands on the D2 diagonal with weight (s_a + s_b)/(N-1)
  if (opts.sz.has_value()) {
    ConstraintRow row;
    for (int p = 0; p < pdim; ++p) {
      auto [a, b] = pairs.unpack(p);
      const double sa = spin_of(a) == 0 ? 0.5 : -0.5;
      const double sb = spin_of(b) == 0 ? 0.5 : -0.5;
      const double w = (sa + sb) / (n - 1);
      if (w != 0.0) row.entries.emplace_back(lay.coord(out.d2_block, p, p), w);
    }
    row.rhs = *opts.sz;
    out.sz_row = out.system.n_rows();
    out.system.rows.push_back(std::move(row));
  }

  auto link = [&](const std::string& name, AffineMap map) {
    const int block = lay.block_index(name);
    append_link_rows(out.system, block, map, out.d2_block);
    out.links.push_back({block, std::move(map)});
  };

  link("Q2", map_D_to_Q(r, n));
  link("G2", map_D_to_G(r, n));
  if (conditions.t2) link("T2", map_D_to_T2(r, n));
  if (opts.d1q1_blocks) {
    link("D1", map_D_to_1rdm(r, n));
    link("Q1", map_D_to_Q1(r, n));
  }

  out.system.remove_redundant();
  return out;
}

}  // namespace v2rdm
