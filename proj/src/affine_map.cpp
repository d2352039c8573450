#include "v2rdm/affine_map.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "v2rdm/op_string.hpp"

namespace v2rdm {

AffineMap::AffineMap(int out_dim, int d2_dim)
    : out_dim_(out_dim),
      d2_dim_(d2_dim),
      entries_(static_cast<std::size_t>(out_dim) * (out_dim + 1) / 2) {}

namespace {
inline std::size_t tri_index(int i, int j, int n) {
  // upper triangle, row-major: (i, j) with i <= j
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 -
         i + j;
}
}  // namespace

MapEntry& AffineMap::entry(int i, int j) {
  return entries_[tri_index(i, j, out_dim_)];
}

const MapEntry& AffineMap::entry(int i, int j) const {
  return entries_[tri_index(i, j, out_dim_)];
}

Eigen::MatrixXd AffineMap::apply(const Eigen::MatrixXd& d2) const {
  Eigen::MatrixXd out(out_dim_, out_dim_);
  for (int i = 0; i < out_dim_; ++i) {
    for (int j = i; j < out_dim_; ++j) {
      const MapEntry& e = entry(i, j);
      double v = e.constant;
      for (const auto& c : e.lin) v += c.value * d2(c.row, c.col);
      out(i, j) = out(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd AffineMap::adjoint_apply(const Eigen::MatrixXd& y) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d2_dim_, d2_dim_);
  for (int i = 0; i < out_dim_; ++i) {
    for (int j = i; j < out_dim_; ++j) {
      const double w = (i == j ? 1.0 : 2.0) * y(i, j);
      for (const auto& c : entry(i, j).lin) {
        if (c.row == c.col) {
          out(c.row, c.col) += w * c.value;
        } else {
          out(c.row, c.col) += 0.5 * w * c.value;
          out(c.col, c.row) += 0.5 * w * c.value;
        }
      }
    }
  }
  return out;
}

namespace {

// Convert the normal form of a defining operator string into an affine
// expression over packed 2-RDM elements. One-body monomials are expanded
// through the 1/(N-1) contraction; rank-three monomials must have cancelled
// upstream.
MapEntry to_entry(const NormalForm& nf, const PairIndexer& pairs, int n) {
  const int r = pairs.rank();
  MapEntry out;
  std::map<std::pair<int, int>, double> lin;

  for (const auto& [term, c] : nf) {
    if (std::abs(c) < 1e-12) continue;
    if (term.create.size() != term.annihilate.size())
      throw std::logic_error("affine map: unbalanced monomial");
    switch (term.create.size()) {
      case 0:
        out.constant += c;
        break;
      case 1: {
        const int p = term.create[0], q = term.annihilate[0];
        for (int m = 0; m < r; ++m) {
          auto [row, sr] = pairs.pack_signed(p, m);
          auto [col, sc] = pairs.pack_signed(q, m);
          if (sr == 0 || sc == 0) continue;
          auto key = std::minmax(row, col);
          lin[{key.first, key.second}] += c * sr * sc / (n - 1);
        }
        break;
      }
      case 2: {
        const int row = pairs.pack(term.create[0], term.create[1]);
        const int col = pairs.pack(term.annihilate[0], term.annihilate[1]);
        auto key = std::minmax(row, col);
        lin[{key.first, key.second}] += c;
        break;
      }
      default:
        throw std::logic_error(
            "affine map: three-body monomial did not cancel");
    }
  }

  out.lin.reserve(lin.size());
  for (const auto& [key, v] : lin)
    if (std::abs(v) > 1e-14) out.lin.push_back({key.first, key.second, v});
  return out;
}

void check_preconditions(int r, int n) {
  if (r < 2) throw std::invalid_argument("affine map: rank must be >= 2");
  if (n < 2) throw std::invalid_argument("affine map: particle number must be >= 2");
}

}  // namespace

AffineMap map_D_to_1rdm(int r, int n) {
  check_preconditions(r, n);
  PairIndexer pairs(r);
  AffineMap map(r, pairs.dim());
  for (int p = 0; p < r; ++p)
    for (int q = p; q < r; ++q)
      map.entry(p, q) = to_entry(normal_order({{p, true}, {q, false}}), pairs, n);
  return map;
}

AffineMap map_D_to_Q1(int r, int n) {
  AffineMap map = map_D_to_1rdm(r, n);
  for (int p = 0; p < r; ++p) {
    for (int q = p; q < r; ++q) {
      MapEntry& e = map.entry(p, q);
      for (auto& c : e.lin) c.value = -c.value;
      e.constant = (p == q ? 1.0 : 0.0) - e.constant;
    }
  }
  return map;
}

AffineMap map_D_to_Q(int r, int n) {
  check_preconditions(r, n);
  PairIndexer pairs(r);
  AffineMap map(pairs.dim(), pairs.dim());
  for (int a = 0; a < pairs.dim(); ++a) {
    auto [i, j] = pairs.unpack(a);
    for (int b = a; b < pairs.dim(); ++b) {
      auto [k, l] = pairs.unpack(b);
      // a_i a_j a+_l a+_k
      map.entry(a, b) = to_entry(
          normal_order({{i, false}, {j, false}, {l, true}, {k, true}}), pairs, n);
    }
  }
  return map;
}

AffineMap map_D_to_G(int r, int n) {
  check_preconditions(r, n);
  PairIndexer pairs(r);
  OrderedPairIndexer ordered(r);
  AffineMap map(ordered.dim(), pairs.dim());
  for (int a = 0; a < ordered.dim(); ++a) {
    auto [i, j] = ordered.unpack(a);
    for (int b = a; b < ordered.dim(); ++b) {
      auto [k, l] = ordered.unpack(b);
      // a+_i a_j a+_l a_k
      map.entry(a, b) = to_entry(
          normal_order({{i, true}, {j, false}, {l, true}, {k, false}}), pairs, n);
    }
  }
  return map;
}

AffineMap map_D_to_T2(int r, int n) {
  check_preconditions(r, n);
  PairIndexer pairs(r);
  TripleIndexer triples(r);
  AffineMap map(triples.dim(), pairs.dim());
  for (int a = 0; a < triples.dim(); ++a) {
    auto [pa, k] = triples.unpack(a);
    auto [i, j] = triples.pairs().unpack(pa);
    const std::vector<FermiOp> bi = {{i, true}, {j, true}, {k, false}};
    for (int b = a; b < triples.dim(); ++b) {
      auto [pb, nn] = triples.unpack(b);
      auto [l, m] = triples.pairs().unpack(pb);
      // B_J+ for B_J = a+_l a+_m a_n
      const std::vector<FermiOp> bjd = {{nn, true}, {m, false}, {l, false}};

      // anticommutator {B_I, B_J+}: the three-body pieces cancel between the
      // two orderings, leaving an expression in the 2-RDM alone
      std::vector<FermiOp> s1 = bi;
      s1.insert(s1.end(), bjd.begin(), bjd.end());
      std::vector<FermiOp> s2 = bjd;
      s2.insert(s2.end(), bi.begin(), bi.end());

      NormalForm nf;
      accumulate_normal_order(nf, s1, 1.0);
      accumulate_normal_order(nf, s2, 1.0);
      map.entry(a, b) = to_entry(nf, pairs, n);
    }
  }
  return map;
}

}  // namespace v2rdm
