#include "v2rdm/ground_state.hpp"

#include <random>

namespace v2rdm {

Eigen::MatrixXd dense_hamiltonian(const SecondQuantizedOperator& op,
                                  const FockBasis& basis) {
  const int dim = basis.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  Wavefunction unit{&basis, Eigen::VectorXd::Zero(dim)};
  for (int j = 0; j < dim; ++j) {
    unit.coeffs.setZero();
    unit.coeffs[j] = 1.0;
    h.col(j) = apply_operator(op, unit).coeffs;
  }
  return h;
}

namespace {

GroundStateResult lanczos_ground_state(const SecondQuantizedOperator& op,
                                       const FockBasis& basis,
                                       const EigensolverOptions& opts) {
  const int dim = basis.size();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::VectorXd v0(dim);
  for (int i = 0; i < dim; ++i) v0[i] = gauss(rng);
  v0.normalize();

  std::vector<Eigen::VectorXd> vecs{v0};
  std::vector<double> alpha, beta;

  GroundStateResult result;
  result.psi.basis = &basis;

  auto tridiag_ground = [&](int k, Eigen::VectorXd* evec) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (evec) *evec = es.eigenvectors().col(0);
    return es.eigenvalues()[0];
  };

  Wavefunction cur{&basis, v0};
  double theta = 0.0;
  bool breakdown = false;

  for (int k = 0; k < opts.lanczos_max_iter && k < dim; ++k) {
    cur.coeffs = vecs[k];
    Eigen::VectorXd w = apply_operator(op, cur).coeffs;
    alpha.push_back(vecs[k].dot(w));
    w -= alpha[k] * vecs[k];
    if (k > 0) w -= beta[k - 1] * vecs[k - 1];
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : vecs) w -= v.dot(w) * v;

    const double b = w.norm();
    result.iterations = k + 1;

    const bool check = (k % 10 == 9) || b < 1e-12 ||
                       k + 1 == opts.lanczos_max_iter || k + 1 == dim;
    if (check) {
      Eigen::VectorXd s;
      theta = tridiag_ground(k + 1, &s);
      const double rayleigh_res = b * std::abs(s[k]);
      if (rayleigh_res <= opts.lanczos_tol * std::max(1.0, std::abs(theta)) ||
          b < 1e-12 || k + 1 == dim) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i <= k; ++i) x += s[i] * vecs[i];
        x.normalize();
        result.psi.coeffs = x;
        result.energy = theta;
        cur.coeffs = x;
        result.residual = (apply_operator(op, cur).coeffs - theta * x).norm();
        result.converged =
            result.residual <= 1e2 * opts.lanczos_tol * std::max(1.0, std::abs(theta));
        breakdown = true;
        break;
      }
    }

    beta.push_back(b);
    vecs.push_back(w / b);
  }

  if (!breakdown) {
    // iteration cap: report the best available Ritz pair with its residual
    const int k = static_cast<int>(alpha.size());
    Eigen::VectorXd s;
    theta = tridiag_ground(k, &s);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < k; ++i) x += s[i] * vecs[i];
    x.normalize();
    result.psi.coeffs = x;
    result.energy = theta;
    cur.coeffs = x;
    result.residual = (apply_operator(op, cur).coeffs - theta * x).norm();
    result.converged = false;
  }
  return result;
}

}  // namespace

GroundStateResult ground_state(const SecondQuantizedOperator& op,
                               const FockBasis& basis,
                               const EigensolverOptions& opts) {
  if (basis.size() <= opts.dense_cutoff) {
    Eigen::MatrixXd h = dense_hamiltonian(op, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    GroundStateResult result;
    result.energy = es.eigenvalues()[0];
    result.psi = Wavefunction{&basis, es.eigenvectors().col(0)};
    result.residual =
        (h * result.psi.coeffs - result.energy * result.psi.coeffs).norm();
    return result;
  }
  return lanczos_ground_state(op, basis, opts);
}

}  // namespace v2rdm
