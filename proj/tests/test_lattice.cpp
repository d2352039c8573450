#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "naive_fermion.hpp"
#include "v2rdm/ground_state.hpp"
#include "v2rdm/lattice.hpp"
#include "v2rdm/rdm_extract.hpp"
#include "v2rdm/two_body.hpp"

using namespace v2rdm;

TEST_CASE("bond lists") {
  LatticeSpec open4{4, Boundary::open, 2, 2};
  CHECK(open4.bonds().size() == 3);

  LatticeSpec per4{4, Boundary::periodic, 2, 2};
  CHECK(per4.bonds().size() == 4);

  // wrap-around would duplicate the single bond
  LatticeSpec per2{2, Boundary::periodic, 1, 1};
  auto b = per2.bonds();
  REQUIRE(b.size() == 1);
  CHECK(b[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS((LatticeSpec{1, Boundary::open, 0, 0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((LatticeSpec{4, Boundary::open, 5, 0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      build_extended_hubbard({1, Boundary::open, 0, 0}, {1, 0, 0}),
      std::invalid_argument);
  CHECK_THROWS_AS((HubbardParams{1.0 / 0.0, 0, 0}).validate(),
                  std::invalid_argument);
}

TEST_CASE("pure hopping dimer has exactly four terms") {
  auto op = build_extended_hubbard({2, Boundary::open, 1, 1}, {1.0, 0.0, 0.0});
  CHECK(op.terms().size() == 4);
  for (const auto& t : op.terms()) CHECK(t.ops.size() == 2);
}

TEST_CASE("interaction term counts per bond") {
  // single bond, V != 0: four spin combinations; one U term per site
  auto op = build_extended_hubbard({2, Boundary::periodic, 1, 1}, {0.0, 1.0, 0.5});
  int n_u = 0, n_v = 0;
  for (const auto& t : op.terms()) {
    REQUIRE(t.ops.size() == 4);
    if (t.coeff == 1.0) ++n_u;
    if (t.coeff == 0.5) ++n_v;
  }
  CHECK(n_u == 2);
  CHECK(n_v == 4);
}

TEST_CASE("generated operators are hermitian") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coupling(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int l = 2 + static_cast<int>(rng() % 3);
    LatticeSpec spec{l, (trial % 2) ? Boundary::open : Boundary::periodic, 1, 1};
    HubbardParams p{coupling(rng), coupling(rng), coupling(rng)};
    CHECK(build_extended_hubbard(spec, p).is_hermitian());
  }
}

TEST_CASE("t=0 expectation values in the CDW and SDW determinants") {
  LatticeSpec spec{4, Boundary::periodic, 2, 2};
  FockBasis basis(4, 2, 2);

  auto expectation = [&](const SecondQuantizedOperator& op, std::uint64_t det) {
    const int idx = basis.index_of(det);
    REQUIRE(idx >= 0);
    Wavefunction psi{&basis, Eigen::VectorXd::Zero(basis.size())};
    psi.coeffs[idx] = 1.0;
    return psi.coeffs.dot(apply_operator(op, psi).coeffs);
  };

  // |ud, 0, ud, 0>: doubly occupied sites 0 and 2
  const std::uint64_t cdw = 0b00110011;
  auto op1 = build_extended_hubbard(spec, {0.0, 1.0, 0.25});
  CHECK(expectation(op1, cdw) == doctest::Approx(2.0).epsilon(1e-12));

  // |u, d, u, d>: singly occupied everywhere
  const std::uint64_t sdw =
      (1ull << orbital_of(0, 0)) | (1ull << orbital_of(1, 1)) |
      (1ull << orbital_of(2, 0)) | (1ull << orbital_of(3, 1));
  auto op2 = build_extended_hubbard(spec, {0.0, 1.0, 1.0});
  CHECK(expectation(op2, sdw) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("analytic t=0 energies") {
  CHECK(analytic_t0_energy(6, 1.0, 1.0) == doctest::Approx(3.0));
  CHECK(analytic_t0_energy(6, 1.0, 0.25) == doctest::Approx(1.5));
  // both branches coincide exactly at the crossing
  CHECK(analytic_t0_energy(6, 1.0, 0.5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(analytic_t0_energy(5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("t=0 operator is diagonal in the determinant basis") {
  for (int l = 2; l <= 4; ++l) {
    LatticeSpec spec{l, Boundary::periodic, 1, 1};
    auto op = build_extended_hubbard(spec, {0.0, 1.3, 0.7});
    FockBasis basis(l, 1, 1);
    Eigen::MatrixXd h = dense_hamiltonian(op, basis);
    Eigen::MatrixXd off = h - Eigen::MatrixXd(h.diagonal().asDiagonal());
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("on-site interaction folds to a unit pair-diagonal") {
  LatticeSpec spec{3, Boundary::open, 1, 1};
  auto op = build_extended_hubbard(spec, {0.0, 1.0, 0.0});
  auto red = reduce_to_two_body(op, 2);
  for (int p = 0; p < red.pairs.dim(); ++p) {
    auto [i, j] = red.pairs.unpack(p);
    const bool onsite_pair = (site_of(i) == site_of(j));
    for (int q = 0; q < red.pairs.dim(); ++q) {
      const double expected = (p == q && onsite_pair) ? 1.0 : 0.0;
      CHECK(red.k2(p, q) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("reduction rejects invalid input") {
  LatticeSpec spec{2, Boundary::open, 1, 1};
  auto op = build_extended_hubbard(spec, {1.0, 0.0, 0.0});
  CHECK_THROWS_AS(reduce_to_two_body(op, 1), std::invalid_argument);

  SecondQuantizedOperator odd(4);
  odd.add_term(1.0, {{0, true}});
  CHECK_THROWS_AS(reduce_to_two_body(odd, 2), std::invalid_argument);
}

TEST_CASE("dimer: pair-space energy matches the analytic ground state") {
  // independent oracle: dense matrix from the reference determinant algebra
  LatticeSpec spec{2, Boundary::open, 1, 1};
  HubbardParams params{1.0, 4.0, 0.0};
  auto op = build_extended_hubbard(spec, params);
  FockBasis basis(2, 1, 1);
  Eigen::MatrixXd h = naive::dense_hamiltonian(op, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);

  const double closed_form =
      0.5 * (params.u - std::sqrt(params.u * params.u + 16.0 * params.t * params.t));
  CHECK(es.eigenvalues()[0] == doctest::Approx(2.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(es.eigenvalues()[0] == doctest::Approx(closed_form).epsilon(1e-12));

  // minimum over eigenstates of Tr(K2 D2) is the ground energy
  auto red = reduce_to_two_body(op, 2);
  double min_energy = std::numeric_limits<double>::infinity();
  for (int k = 0; k < basis.size(); ++k) {
    Wavefunction psi{&basis, es.eigenvectors().col(k)};
    min_energy = std::min(min_energy, red.energy(extract_D2(psi)));
  }
  CHECK(min_energy == doctest::Approx(2.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("energy identity: Tr(K2 D2) reproduces every eigenvalue") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coupling(-2.0, 2.0);
  struct Sector {
    int l, nu, nd;
  };
  for (const Sector s : {Sector{2, 1, 1}, Sector{3, 2, 1}, Sector{3, 2, 2}}) {
    for (int trial = 0; trial < 4; ++trial) {
      LatticeSpec spec{s.l, (trial % 2) ? Boundary::open : Boundary::periodic,
                       s.nu, s.nd};
      HubbardParams p{coupling(rng), coupling(rng), coupling(rng)};
      auto op = build_extended_hubbard(spec, p);
      FockBasis basis(s.l, s.nu, s.nd);
      Eigen::MatrixXd h = naive::dense_hamiltonian(op, basis);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      auto red = reduce_to_two_body(op, s.nu + s.nd);
      for (int k = 0; k < basis.size(); ++k) {
        Wavefunction psi{&basis, es.eigenvectors().col(k)};
        CHECK(red.energy(extract_D2(psi)) ==
              doctest::Approx(es.eigenvalues()[k]).epsilon(1e-10));
      }
    }
  }
}
