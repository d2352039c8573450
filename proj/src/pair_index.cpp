#include "v2rdm/pair_index.hpp"

#include <stdexcept>

namespace v2rdm {

PairIndexer::PairIndexer(int rank) : rank_(rank), dim_(rank * (rank - 1) / 2) {
  if (rank < 2) throw std::invalid_argument("PairIndexer: rank must be >= 2");
  offset_.resize(rank_);
  pairs_.reserve(dim_);
  int idx = 0;
  for (int i = 0; i < rank_; ++i) {
    offset_[i] = idx - (i + 1);  // pack(i,j) = offset_[i] + j
    for (int j = i + 1; j < rank_; ++j) {
      pairs_.emplace_back(i, j);
      ++idx;
    }
  }
}

int PairIndexer::pack(int i, int j) const {
  if (i < 0 || j <= i || j >= rank_)
    throw std::out_of_range("PairIndexer::pack: need 0 <= i < j < rank");
  return offset_[i] + j;
}

std::pair<int, int> PairIndexer::pack_signed(int i, int j) const {
  if (i == j) return {0, 0};
  if (i < j) return {pack(i, j), 1};
  return {pack(j, i), -1};
}

}  // namespace v2rdm
