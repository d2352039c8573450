#include "v2rdm/wavefunction.hpp"

#include <bit>
#include <stdexcept>

namespace v2rdm {

namespace {

inline int parity_below(std::uint64_t det, int p) {
  const std::uint64_t mask = (std::uint64_t{1} << p) - 1;
  return (std::popcount(det & mask) & 1) ? -1 : 1;
}

}  // namespace

std::optional<std::pair<std::uint64_t, int>> apply_string(
    const std::vector<FermiOp>& ops, std::uint64_t det) {
  int sign = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const std::uint64_t bit = std::uint64_t{1} << it->orbital;
    if (it->dagger) {
      if (det & bit) return std::nullopt;
      sign *= parity_below(det, it->orbital);
      det |= bit;
    } else {
      if (!(det & bit)) return std::nullopt;
      sign *= parity_below(det, it->orbital);
      det &= ~bit;
    }
  }
  return std::make_pair(det, sign);
}

Wavefunction apply_operator(const SecondQuantizedOperator& op,
                            const Wavefunction& psi) {
  const FockBasis& basis = *psi.basis;
  Wavefunction out{psi.basis, Eigen::VectorXd::Zero(basis.size())};
  for (const auto& term : op.terms()) {
    for (int i = 0; i < basis.size(); ++i) {
      const double c = psi.coeffs[i];
      if (c == 0.0) continue;
      auto hit = apply_string(term.ops, basis.det(i));
      if (!hit) continue;
      const int j = basis.index_of(hit->first);
      if (j < 0)
        throw std::invalid_argument(
            "apply_operator: term leaves the (N_up, N_down) sector");
      out.coeffs[j] += term.coeff * hit->second * c;
    }
  }
  return out;
}

SparseState apply_string_to_state(const std::vector<FermiOp>& ops,
                                  const Wavefunction& psi) {
  SparseState out;
  const FockBasis& basis = *psi.basis;
  for (int i = 0; i < basis.size(); ++i) {
    const double c = psi.coeffs[i];
    if (c == 0.0) continue;
    auto hit = apply_string(ops, basis.det(i));
    if (!hit) continue;
    out[hit->first] += hit->second * c;
  }
  return out;
}

double dot(const SparseState& a, const SparseState& b) {
  const SparseState& small = (a.size() <= b.size()) ? a : b;
  const SparseState& large = (a.size() <= b.size()) ? b : a;
  double sum = 0.0;
  for (const auto& [word, value] : small) {
    auto it = large.find(word);
    if (it != large.end()) sum += value * it->second;
  }
  return sum;
}

}  // namespace v2rdm
