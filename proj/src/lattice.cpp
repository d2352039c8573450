#include "v2rdm/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace v2rdm {

void LatticeSpec::validate() const {
  if (sites < 2) throw std::invalid_argument("LatticeSpec: need at least 2 sites");
  if (n_up < 0 || n_down < 0 || n_up > sites || n_down > sites)
    throw std::invalid_argument("LatticeSpec: fillings must satisfy 0 <= N_s <= L");
}

std::vector<std::pair<int, int>> LatticeSpec::bonds() const {
  validate();
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i + 1 < sites; ++i) out.emplace_back(i, i + 1);
  // The wrap-around bond duplicates (0,1) when L = 2.
  if (boundary == Boundary::periodic && sites > 2) out.emplace_back(sites - 1, 0);
  return out;
}

LatticeSpec LatticeSpec::half_filled(int sites, Boundary b) {
  if (sites % 2 != 0)
    throw std::invalid_argument("half_filled: L must be even");
  return LatticeSpec{sites, b, sites / 2, sites / 2};
}

void HubbardParams::validate() const {
  if (!std::isfinite(t) || !std::isfinite(u) || !std::isfinite(v))
    throw std::invalid_argument("HubbardParams: couplings must be finite");
}

SecondQuantizedOperator build_extended_hubbard(const LatticeSpec& spec,
                                               const HubbardParams& params) {
  spec.validate();
  params.validate();

  SecondQuantizedOperator op(spec.rank());
  const auto bonds = spec.bonds();

  if (params.t != 0.0) {
    for (const auto& [i, j] : bonds) {
      for (int s = 0; s < 2; ++s) {
        const int p = orbital_of(i, s), q = orbital_of(j, s);
        op.add_term(-params.t, {{p, true}, {q, false}});
        op.add_term(-params.t, {{q, true}, {p, false}});
      }
    }
  }

  if (params.u != 0.0) {
    for (int i = 0; i < spec.sites; ++i) {
      const int up = orbital_of(i, 0), dn = orbital_of(i, 1);
      op.add_term(params.u, {{up, true}, {up, false}, {dn, true}, {dn, false}});
    }
  }

  if (params.v != 0.0) {
    for (const auto& [i, j] : bonds) {
      for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
          const int p = orbital_of(i, s), q = orbital_of(j, sp);
          op.add_term(params.v, {{p, true}, {p, false}, {q, true}, {q, false}});
        }
      }
    }
  }

  return op;
}

double analytic_t0_energy(int sites, double u, double v) {
  if (sites % 2 != 0)
    throw std::invalid_argument("analytic_t0_energy: L must be even");
  const double cdw = u * sites / 2.0;
  const double sdw = v * sites;
  if (u < 2.0 * v) return cdw;
  if (u > 2.0 * v) return sdw;
  return std::min(cdw, sdw);
}

}  // namespace v2rdm
