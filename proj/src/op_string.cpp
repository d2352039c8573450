#include "v2rdm/op_string.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2rdm {

namespace {

// Sort `v` ascending by repeated adjacent swaps, tracking the permutation
// parity. Returns 0 if any index repeats (nilpotency kills the term).
int sort_with_parity(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] == v[i - 1]) return 0;
  return sign;
}

struct WorkTerm {
  double coeff;
  std::vector<FermiOp> ops;
};

}  // namespace

void accumulate_normal_order(NormalForm& into, const std::vector<FermiOp>& ops,
                             double coeff) {
  std::vector<WorkTerm> stack;
  stack.push_back({coeff, ops});

  while (!stack.empty()) {
    WorkTerm t = std::move(stack.back());
    stack.pop_back();

    // Find the first annihilator immediately followed by a creator.
    std::size_t pos = t.ops.size();
    for (std::size_t k = 0; k + 1 < t.ops.size(); ++k) {
      if (!t.ops[k].dagger && t.ops[k + 1].dagger) {
        pos = k;
        break;
      }
    }

    if (pos != t.ops.size()) {
      // a_p a+_q = delta_pq - a+_q a_p
      if (t.ops[pos].orbital == t.ops[pos + 1].orbital) {
        WorkTerm contracted{t.coeff, {}};
        contracted.ops.reserve(t.ops.size() - 2);
        contracted.ops.insert(contracted.ops.end(), t.ops.begin(),
                              t.ops.begin() + pos);
        contracted.ops.insert(contracted.ops.end(), t.ops.begin() + pos + 2,
                              t.ops.end());
        stack.push_back(std::move(contracted));
      }
      std::swap(t.ops[pos], t.ops[pos + 1]);
      t.coeff = -t.coeff;
      stack.push_back(std::move(t));
      continue;
    }

    // All creators are left of all annihilators; canonicalize each group.
    std::vector<int> create, annihilate;
    for (const auto& op : t.ops)
      (op.dagger ? create : annihilate).push_back(op.orbital);

    int sc = sort_with_parity(create);
    if (sc == 0) continue;
    // Annihilators as written act in reverse; canonical order is ascending
    // from the right, i.e. descending as written.  Sorting the as-written
    // list ascending and then reversing is the same permutation as sorting
    // descending, so track parity on the ascending sort and keep the
    // ascending list (which names the canonical monomial directly).
    std::reverse(annihilate.begin(), annihilate.end());
    int sa = sort_with_parity(annihilate);
    if (sa == 0) continue;

    NormalTerm key{std::move(create), std::move(annihilate)};
    into[key] += t.coeff * sc * sa;
  }
}

NormalForm normal_order(const std::vector<FermiOp>& ops, double coeff) {
  NormalForm out;
  accumulate_normal_order(out, ops, coeff);
  for (auto it = out.begin(); it != out.end();)
    it = (std::abs(it->second) < 1e-14) ? out.erase(it) : std::next(it);
  return out;
}

SecondQuantizedOperator::SecondQuantizedOperator(int rank) : rank_(rank) {
  if (rank < 1)
    throw std::invalid_argument("SecondQuantizedOperator: rank must be >= 1");
}

void SecondQuantizedOperator::add_term(double coeff, std::vector<FermiOp> ops) {
  for (const auto& op : ops)
    if (op.orbital < 0 || op.orbital >= rank_)
      throw std::out_of_range("SecondQuantizedOperator: orbital out of range");
  terms_.push_back({coeff, std::move(ops)});
}

NormalForm SecondQuantizedOperator::normal_form() const {
  NormalForm out;
  for (const auto& t : terms_) accumulate_normal_order(out, t.ops, t.coeff);
  for (auto it = out.begin(); it != out.end();)
    it = (std::abs(it->second) < 1e-14) ? out.erase(it) : std::next(it);
  return out;
}

bool SecondQuantizedOperator::is_hermitian(double tol) const {
  // The adjoint of the canonical monomial (C | A) is (A | C) with the same
  // real coefficient, so hermiticity is symmetry of the normal form.
  NormalForm nf = normal_form();
  for (const auto& [term, c] : nf) {
    NormalTerm adj{term.annihilate, term.create};
    auto it = nf.find(adj);
    double cadj = (it == nf.end()) ? 0.0 : it->second;
    if (std::abs(c - cadj) > tol * std::max(1.0, std::abs(c))) return false;
  }
  return true;
}

}  // namespace v2rdm
