#include "v2rdm/fock_basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2rdm {

namespace {

// All ways to place n bits among `sites` positions, expanded onto spin-orbital
// bits 2*site + spin.
std::vector<std::uint64_t> spin_configs(int sites, int n, int spin) {
  std::vector<std::uint64_t> out;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::uint64_t word = 0;
    for (int s : pick) word |= std::uint64_t{1} << (2 * s + spin);
    out.push_back(word);
    // next combination in lexicographic order
    int i = n - 1;
    while (i >= 0 && pick[i] == sites - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

}  // namespace

FockBasis::FockBasis(int sites, int n_up, int n_down)
    : sites_(sites), n_up_(n_up), n_down_(n_down) {
  if (sites < 1) throw std::invalid_argument("FockBasis: need at least 1 site");
  if (sites > 31)
    throw std::invalid_argument("FockBasis: L > 31 exceeds the 64-bit word");
  if (n_up < 0 || n_down < 0 || n_up > sites || n_down > sites)
    throw std::invalid_argument("FockBasis: need 0 <= N_s <= L");

  const auto ups = spin_configs(sites, n_up, 0);
  const auto downs = spin_configs(sites, n_down, 1);
  dets_.reserve(ups.size() * downs.size());
  for (auto u : ups)
    for (auto d : downs) dets_.push_back(u | d);
  std::sort(dets_.begin(), dets_.end());

  index_.reserve(dets_.size());
  for (int i = 0; i < size(); ++i) index_[dets_[i]] = i;
}

}  // namespace v2rdm
