#include "v2rdm/two_body.hpp"

#include <stdexcept>

namespace v2rdm {

ReducedTwoBodyMatrix reduce_to_two_body(const SecondQuantizedOperator& op,
                                        int n_particles) {
  if (n_particles < 2)
    throw std::invalid_argument(
        "reduce_to_two_body: energy is a two-body functional only for N >= 2");
  const int r = op.rank();
  const int n = n_particles;
  PairIndexer pairs(r);
  Eigen::MatrixXd k2 = Eigen::MatrixXd::Zero(pairs.dim(), pairs.dim());

  auto add_sym = [&](int p, int q, double c) {
    if (p == q) {
      k2(p, p) += c;
    } else {
      k2(p, q) += 0.5 * c;
      k2(q, p) += 0.5 * c;
    }
  };

  const double pair_trace = n * (n - 1) / 2.0;

  for (const auto& [term, c] : op.normal_form()) {
    if (term.create.size() != term.annihilate.size())
      throw std::invalid_argument(
          "reduce_to_two_body: particle-nonconserving (odd) string");
    switch (term.create.size()) {
      case 0:
        // Constant shift, spread over the fixed-trace diagonal.
        for (int p = 0; p < pairs.dim(); ++p) k2(p, p) += c / pair_trace;
        break;
      case 1: {
        // <a+_p a_q> = (1/(N-1)) sum_m D2^{pm}_{qm}
        const int p = term.create[0], q = term.annihilate[0];
        for (int m = 0; m < r; ++m) {
          auto [row, sr] = pairs.pack_signed(p, m);
          auto [col, sc] = pairs.pack_signed(q, m);
          if (sr == 0 || sc == 0) continue;
          add_sym(row, col, c * sr * sc / (n - 1));
        }
        break;
      }
      case 2: {
        const int row = pairs.pack(term.create[0], term.create[1]);
        const int col = pairs.pack(term.annihilate[0], term.annihilate[1]);
        add_sym(row, col, c);
        break;
      }
      default:
        throw std::invalid_argument(
            "reduce_to_two_body: operator has three-body or higher content");
    }
  }

  return ReducedTwoBodyMatrix{pairs, n, std::move(k2)};
}

}  // namespace v2rdm
