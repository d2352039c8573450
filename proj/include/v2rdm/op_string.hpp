#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace v2rdm {

/// One factor in a product of fermionic ladder operators.
struct FermiOp {
  int orbital;
  bool dagger;
};

/// A product of ladder operators with a real coefficient. The ops vector is
/// read left to right as written in operator notation, so the rightmost
/// factor acts first on a ket.
struct OpTerm {
  double coeff;
  std::vector<FermiOp> ops;
};

/// Canonical normal-ordered monomial. `create` and `annihilate` are sorted
/// ascending; the monomial it names is
///   a+_{c0} a+_{c1} ... a_{q_{k-1}} ... a_{q_1} a_{q_0}
/// i.e. creators ascending left to right, annihilators ascending from the
/// right. With this convention the expectation value of a two-body monomial
/// is exactly one packed 2-RDM element, with no residual sign.
struct NormalTerm {
  std::vector<int> create;
  std::vector<int> annihilate;
  bool operator<(const NormalTerm& o) const {
    if (create != o.create) return create < o.create;
    return annihilate < o.annihilate;
  }
  bool operator==(const NormalTerm& o) const {
    return create == o.create && annihilate == o.annihilate;
  }
};

using NormalForm = std::map<NormalTerm, double>;

/// Normal-order a single operator string by repeated application of the
/// canonical anticommutation relations. Exact for integer coefficient
/// bookkeeping; terms that cancel identically are removed.
NormalForm normal_order(const std::vector<FermiOp>& ops, double coeff = 1.0);

/// Accumulate the normal form of `ops` (times coeff) into an existing form.
void accumulate_normal_order(NormalForm& into, const std::vector<FermiOp>& ops,
                             double coeff);

/// Sparse sum of fermionic operator strings over `rank` spin orbitals.
class SecondQuantizedOperator {
 public:
  explicit SecondQuantizedOperator(int rank);

  int rank() const { return rank_; }
  const std::vector<OpTerm>& terms() const { return terms_; }

  void add_term(double coeff, std::vector<FermiOp> ops);

  /// Normal form of the whole operator (sum over terms).
  NormalForm normal_form() const;

  /// True when the normal form is invariant under taking the adjoint,
  /// i.e. the term set is closed under conjugation with equal coefficients.
  bool is_hermitian(double tol = 1e-12) const;

 private:
  int rank_;
  std::vector<OpTerm> terms_;
};

}  // namespace v2rdm
