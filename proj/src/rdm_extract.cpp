#include "v2rdm/rdm_extract.hpp"

#include <vector>

namespace v2rdm {

namespace {

// Gram matrix of a family of transformed states: M[a][b] = <vec_a, vec_b>.
Eigen::MatrixXd gram(const std::vector<SparseState>& vecs) {
  const int n = static_cast<int>(vecs.size());
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m(a, b) = m(b, a) = dot(vecs[a], vecs[b]);
  return m;
}

}  // namespace

Eigen::MatrixXd extract_D2(const Wavefunction& psi) {
  const PairIndexer pairs(psi.basis->rank());
  std::vector<SparseState> vecs(pairs.dim());
  for (int p = 0; p < pairs.dim(); ++p) {
    auto [k, l] = pairs.unpack(p);
    // a_l a_k |psi>
    vecs[p] = apply_string_to_state({{l, false}, {k, false}}, psi);
  }
  return gram(vecs);
}

Eigen::MatrixXd extract_Q2(const Wavefunction& psi) {
  const PairIndexer pairs(psi.basis->rank());
  std::vector<SparseState> vecs(pairs.dim());
  for (int p = 0; p < pairs.dim(); ++p) {
    auto [k, l] = pairs.unpack(p);
    // a+_l a+_k |psi>
    vecs[p] = apply_string_to_state({{l, true}, {k, true}}, psi);
  }
  return gram(vecs);
}

Eigen::MatrixXd extract_G2(const Wavefunction& psi) {
  const OrderedPairIndexer pairs(psi.basis->rank());
  std::vector<SparseState> vecs(pairs.dim());
  for (int p = 0; p < pairs.dim(); ++p) {
    auto [i, j] = pairs.unpack(p);
    // a+_j a_i |psi>
    vecs[p] = apply_string_to_state({{j, true}, {i, false}}, psi);
  }
  return gram(vecs);
}

Eigen::MatrixXd extract_E3(const Wavefunction& psi) {
  const TripleIndexer triples(psi.basis->rank());
  std::vector<SparseState> vecs(triples.dim());
  for (int t = 0; t < triples.dim(); ++t) {
    auto [p, k] = triples.unpack(t);
    auto [i, j] = triples.pairs().unpack(p);
    // (a+_i a+_j a_k)^dagger |psi> = a+_k a_j a_i |psi>
    vecs[t] = apply_string_to_state({{k, true}, {j, false}, {i, false}}, psi);
  }
  return gram(vecs);
}

Eigen::MatrixXd extract_F3(const Wavefunction& psi) {
  const TripleIndexer triples(psi.basis->rank());
  std::vector<SparseState> vecs(triples.dim());
  for (int t = 0; t < triples.dim(); ++t) {
    auto [p, k] = triples.unpack(t);
    auto [i, j] = triples.pairs().unpack(p);
    // a+_i a+_j a_k |psi>
    vecs[t] = apply_string_to_state({{i, true}, {j, true}, {k, false}}, psi);
  }
  return gram(vecs);
}

Eigen::MatrixXd extract_T2(const Wavefunction& psi) {
  return extract_E3(psi) + extract_F3(psi);
}

Eigen::MatrixXd extract_1rdm(const Wavefunction& psi) {
  const int r = psi.basis->rank();
  std::vector<SparseState> vecs(r);
  for (int p = 0; p < r; ++p)
    vecs[p] = apply_string_to_state({{p, false}}, psi);
  return gram(vecs);
}

MetricMatrices extract_all(const Wavefunction& psi, bool with_t2) {
  MetricMatrices m;
  m.d2 = extract_D2(psi);
  m.q2 = extract_Q2(psi);
  m.g2 = extract_G2(psi);
  if (with_t2) {
    m.e3 = extract_E3(psi);
    m.f3 = extract_F3(psi);
    m.t2 = m.e3 + m.f3;
  }
  return m;
}

}  // namespace v2rdm
