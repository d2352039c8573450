#pragma once

#include <utility>
#include <vector>

namespace v2rdm {

/// Bijection between ordered spin-orbital pairs i < j and the packed
/// antisymmetric pair space 0 .. r(r-1)/2 - 1.
class PairIndexer {
 public:
  PairIndexer() : PairIndexer(2) {}
  explicit PairIndexer(int rank);

  int rank() const { return rank_; }
  int dim() const { return dim_; }

  /// Packed index of the pair (i, j); requires i < j.
  int pack(int i, int j) const;

  /// Inverse of pack().
  std::pair<int, int> unpack(int idx) const { return pairs_[idx]; }

  /// Packed index with the antisymmetric sign for an arbitrary ordered pair:
  /// returns {index, +1} for i < j, {index, -1} for i > j, {0, 0} for i == j.
  std::pair<int, int> pack_signed(int i, int j) const;

 private:
  int rank_;
  int dim_;
  std::vector<int> offset_;                   // row offsets into the triangle
  std::vector<std::pair<int, int>> pairs_;    // idx -> (i, j)
};

/// Ordered pairs (i, j), both indices free, packed as i*r + j (dimension r^2).
class OrderedPairIndexer {
 public:
  explicit OrderedPairIndexer(int rank) : rank_(rank) {}
  int rank() const { return rank_; }
  int dim() const { return rank_ * rank_; }
  int pack(int i, int j) const { return i * rank_ + j; }
  std::pair<int, int> unpack(int idx) const { return {idx / rank_, idx % rank_}; }

 private:
  int rank_;
};

/// Triples (i < j; k): an antisymmetric pair plus one free index, packed as
/// pair_index * r + k (dimension r * r(r-1)/2).
class TripleIndexer {
 public:
  explicit TripleIndexer(int rank) : pairs_(rank) {}
  int rank() const { return pairs_.rank(); }
  int dim() const { return pairs_.dim() * pairs_.rank(); }
  const PairIndexer& pairs() const { return pairs_; }
  int pack(int pair_idx, int k) const { return pair_idx * pairs_.rank() + k; }
  /// idx -> (pair_idx, k)
  std::pair<int, int> unpack(int idx) const {
    return {idx / pairs_.rank(), idx % pairs_.rank()};
  }

 private:
  PairIndexer pairs_;
};

}  // namespace v2rdm
