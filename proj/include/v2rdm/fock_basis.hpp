#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace v2rdm {

/// Fixed-(N_up, N_down) determinant basis over 2L spin orbitals.
/// Determinants are occupation words with bit 2*site + spin, sorted ascending
/// by word value; dimension C(L, N_up) * C(L, N_down).
class FockBasis {
 public:
  FockBasis(int sites, int n_up, int n_down);

  int sites() const { return sites_; }
  int rank() const { return 2 * sites_; }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  int n_total() const { return n_up_ + n_down_; }
  int size() const { return static_cast<int>(dets_.size()); }

  std::uint64_t det(int i) const { return dets_[i]; }
  const std::vector<std::uint64_t>& dets() const { return dets_; }

  /// Position of a determinant word, or -1 if outside this sector.
  int index_of(std::uint64_t word) const {
    auto it = index_.find(word);
    return it == index_.end() ? -1 : it->second;
  }

 private:
  int sites_, n_up_, n_down_;
  std::vector<std::uint64_t> dets_;
  std::unordered_map<std::uint64_t, int> index_;
};

}  // namespace v2rdm
