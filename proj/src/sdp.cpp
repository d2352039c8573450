#include "v2rdm/sdp.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace v2rdm {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::maxiter: return "maxiter";
  }
  return "unknown";
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    v[k++] = m(i, i);
    for (int j = i + 1; j < d; ++j) v[k++] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  }
  return v;
}

Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int dim) {
  Eigen::MatrixXd m(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) {
    m(i, i) = v[k++];
    for (int j = i + 1; j < dim; ++j) {
      m(i, j) = m(j, i) = v[k++] / kSqrt2;
    }
  }
  return m;
}

void SdpProblem::validate() const {
  if (objective.size() != layout.blocks.size())
    throw std::invalid_argument("SdpProblem: one objective matrix per block");
  for (std::size_t b = 0; b < objective.size(); ++b) {
    const auto& c = objective[b];
    if (c.rows() != layout.blocks[b].dim || c.cols() != layout.blocks[b].dim)
      throw std::invalid_argument("SdpProblem: objective shape mismatch");
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("SdpProblem: objective must be symmetric");
  }
  const int n = layout.total_svec_dim();
  for (const auto& row : constraints.rows)
    for (const auto& [coord, value] : row.entries) {
      (void)value;
      if (coord < 0 || coord >= n)
        throw std::invalid_argument("SdpProblem: constraint coordinate out of range");
    }
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("project_psd: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

struct ScaledData {
  Eigen::SparseMatrix<double, Eigen::RowMajor> a;  // row-normalized
  Eigen::VectorXd b;                               // scaled rhs
  Eigen::VectorXd c;                               // svec(C)/c_scale
  Eigen::VectorXd row_scale;
  double c_scale = 1.0;
};

ScaledData scale_problem(const SdpProblem& p) {
  const int n = p.layout.total_svec_dim();
  const int m = p.constraints.n_rows();

  ScaledData s;
  s.row_scale.resize(m);
  s.b.resize(m);

  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < m; ++r) {
    const auto& row = p.constraints.rows[r];
    double nrm2 = 0.0;
    for (const auto& [coord, v] : row.entries) {
      (void)coord;
      nrm2 += v * v;
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0)
      throw std::invalid_argument("solve_boundary_point: empty constraint row");
    s.row_scale[r] = nrm;
    s.b[r] = row.rhs / nrm;
    for (const auto& [coord, v] : row.entries)
      trip.emplace_back(r, coord, v / nrm);
  }
  s.a.resize(m, n);
  s.a.setFromTriplets(trip.begin(), trip.end());

  s.c.resize(n);
  double cmax = 0.0;
  for (std::size_t b = 0; b < p.objective.size(); ++b)
    cmax = std::max(cmax, p.objective[b].cwiseAbs().maxCoeff());
  s.c_scale = (cmax > 0.0) ? cmax : 1.0;
  int off = 0;
  for (std::size_t b = 0; b < p.objective.size(); ++b) {
    const int sd = p.layout.svec_dim(static_cast<int>(b));
    s.c.segment(off, sd) = svec(p.objective[b]) / s.c_scale;
    off += sd;
  }
  return s;
}

}  // namespace

SdpSolution solve_boundary_point(const SdpProblem& problem,
                                 const SolverOptions& opts) {
  problem.validate();
  const int n = problem.layout.total_svec_dim();
  const int m = problem.constraints.n_rows();
  const int nblocks = static_cast<int>(problem.layout.blocks.size());

  ScaledData s = scale_problem(problem);

  Eigen::SparseMatrix<double> aat =
      (s.a * Eigen::SparseMatrix<double, Eigen::RowMajor>(s.a.transpose()))
          .pruned();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(aat);
  if (chol.info() != Eigen::Success)
    throw std::runtime_error(
        "solve_boundary_point: A*A^T factorization breakdown");

  // original-unit norms for the convergence test; the loop runs on scaled
  // data but the contract is on residuals recomputed in problem units
  double b_orig_norm = 0.0;
  for (const auto& row : problem.constraints.rows)
    b_orig_norm += row.rhs * row.rhs;
  b_orig_norm = std::sqrt(b_orig_norm);
  double c_orig_norm = 0.0;
  for (const auto& c : problem.objective) c_orig_norm += c.squaredNorm();
  c_orig_norm = std::sqrt(c_orig_norm);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (opts.x0.has_value()) {
    if (static_cast<int>(opts.x0->size()) != nblocks)
      throw std::invalid_argument("solve_boundary_point: x0 block count mismatch");
    int off = 0;
    for (int b = 0; b < nblocks; ++b) {
      const int sd = problem.layout.svec_dim(b);
      x.segment(off, sd) = svec((*opts.x0)[b]);
      off += sd;
    }
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  double mu = opts.mu0;
  const double bnorm = 1.0 + s.b.norm();
  const double cnorm = 1.0 + s.c.norm();

  double best_metric = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = x, best_z = z, best_y = y;

  int iter = 0;
  bool converged = false;

  Eigen::VectorXd aty(n), w(n), ax(m);

  while (iter < opts.max_iter) {
    ++iter;

    // dual solve against the cached factorization
    ax.noalias() = s.a * x;
    Eigen::VectorXd rhs = s.a * (s.c - z) + (s.b - ax) / mu;
    y = chol.solve(rhs);

    // split W into the new Z (positive part) and X (mu * negative part)
    aty.noalias() = s.a.transpose() * y;
    w = s.c - aty - x / mu;
    int off = 0;
    for (int b = 0; b < nblocks; ++b) {
      const int d = problem.layout.blocks[b].dim;
      const int sd = problem.layout.svec_dim(b);
      Eigen::MatrixXd wb = unsvec(w.segment(off, sd), d);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(wb);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_boundary_point: block eigensolver failed");
      const Eigen::VectorXd& lam = es.eigenvalues();
      const Eigen::MatrixXd& u = es.eigenvectors();
      Eigen::MatrixXd zb = u * lam.cwiseMax(0.0).asDiagonal() * u.transpose();
      Eigen::MatrixXd xb = mu * (u * (-lam.cwiseMin(0.0)).asDiagonal() * u.transpose());
      z.segment(off, sd) = svec(zb);
      x.segment(off, sd) = svec(xb);
      off += sd;
    }

    // residuals: scaled units drive the penalty adaptation, original units
    // drive the stopping test (matching what the solution reports)
    ax.noalias() = s.a * x;
    const Eigen::VectorXd prim_vec = ax - s.b;
    const Eigen::VectorXd dual_vec =
        s.c - Eigen::VectorXd(s.a.transpose() * y) - z;
    const double primal = prim_vec.norm() / bnorm;
    const double dual = dual_vec.norm() / cnorm;
    const double cx = s.c.dot(x);
    const double by = s.b.dot(y);
    const double gap = std::abs(cx - by) / (1.0 + std::abs(cx) + std::abs(by));

    const double primal_orig =
        prim_vec.cwiseProduct(s.row_scale).norm() / (1.0 + b_orig_norm);
    const double dual_orig =
        s.c_scale * dual_vec.norm() / (1.0 + c_orig_norm);
    const double gap_orig = s.c_scale * std::abs(cx - by) /
                            (1.0 + s.c_scale * (std::abs(cx) + std::abs(by)));

    if (opts.log && (iter % opts.log_every == 0 || iter == 1)) {
      (*opts.log) << "iter " << iter << " primal " << primal << " dual " << dual
                  << " gap " << gap << " obj " << cx * s.c_scale << " dualobj "
                  << by * s.c_scale << " mu " << mu << "\n";
    }

    // nudge the penalty when the residuals drift apart; doing this at the
    // check cadence rather than every iteration avoids limit cycling
    if (iter % opts.check_every == 0) {
      if (primal > opts.mu_ratio * dual)
        mu = std::max(mu / opts.mu_factor, opts.mu_min);
      else if (dual > opts.mu_ratio * primal)
        mu = std::min(mu * opts.mu_factor, opts.mu_max);
    }
    // occasional proportional re-centering; the 1.1 steps then track from a
    // sensible scale instead of walking across decades
    if (opts.mu_rebalance_every > 0 && iter % opts.mu_rebalance_every == 0 &&
        dual > 0.0 && primal > 0.0) {
      const double ratio =
          std::clamp(std::sqrt(primal / dual), 1.0 / 10.0, 10.0);
      mu = std::clamp(mu / ratio, opts.mu_min, opts.mu_max);
    }

    if (iter % opts.check_every == 0 || iter == opts.max_iter) {
      const double metric = std::max({primal_orig, dual_orig, gap_orig});
      if (metric < best_metric) {
        best_metric = metric;
        best_x = x;
        best_z = z;
        best_y = y;
      }
      if (primal_orig <= opts.eps && dual_orig <= opts.eps &&
          gap_orig <= opts.eps) {
        converged = true;
        break;
      }
    }
  }

  if (!converged) {
    // hand back the best checked iterate; iterations still counts the work
    x = best_x;
    z = best_z;
    y = best_y;
  }

  SdpSolution sol;
  sol.status = converged ? SolveStatus::converged : SolveStatus::maxiter;
  sol.iterations = iter;
  sol.x.resize(nblocks);
  sol.z.resize(nblocks);
  int off = 0;
  for (int b = 0; b < nblocks; ++b) {
    const int d = problem.layout.blocks[b].dim;
    const int sd = problem.layout.svec_dim(b);
    sol.x[b] = unsvec(x.segment(off, sd), d);
    sol.z[b] = s.c_scale * unsvec(z.segment(off, sd), d);
    off += sd;
  }
  sol.y.resize(m);
  for (int r = 0; r < m; ++r) sol.y[r] = s.c_scale * y[r] / s.row_scale[r];

  double obj = 0.0;
  for (int b = 0; b < nblocks; ++b)
    obj += problem.objective[b].cwiseProduct(sol.x[b]).sum();
  sol.objective = obj;
  double by = 0.0;
  for (int r = 0; r < m; ++r) by += problem.constraints.rows[r].rhs * sol.y[r];
  sol.dual_objective = by;

  const ResidualTriplet res = residuals(problem, sol);
  sol.primal_inf = res.primal_inf;
  sol.dual_inf = res.dual_inf;
  sol.gap = res.gap;
  return sol;
}

ResidualTriplet residuals(const SdpProblem& problem, const SdpSolution& sol) {
  const int n = problem.layout.total_svec_dim();
  const int m = problem.constraints.n_rows();
  const int nblocks = static_cast<int>(problem.layout.blocks.size());

  Eigen::VectorXd xs(n), zs(n), cs(n);
  int off = 0;
  for (int b = 0; b < nblocks; ++b) {
    const int sd = problem.layout.svec_dim(b);
    xs.segment(off, sd) = svec(sol.x[b]);
    zs.segment(off, sd) = svec(sol.z[b]);
    cs.segment(off, sd) = svec(problem.objective[b]);
    off += sd;
  }

  Eigen::VectorXd ax(m), bvec(m);
  Eigen::VectorXd aty = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const auto& row = problem.constraints.rows[r];
    double dotv = 0.0;
    for (const auto& [coord, v] : row.entries) {
      dotv += v * xs[coord];
      aty[coord] += v * sol.y[r];
    }
    ax[r] = dotv;
    bvec[r] = row.rhs;
  }

  ResidualTriplet out;
  out.primal_inf = (ax - bvec).norm() / (1.0 + bvec.norm());
  out.dual_inf = (cs - aty - zs).norm() / (1.0 + cs.norm());
  const double cx = cs.dot(xs);
  const double by = bvec.dot(sol.y);
  out.gap = std::abs(cx - by) / (1.0 + std::abs(cx) + std::abs(by));
  return out;
}

void dump_problem(std::ostream& os, const SdpProblem& problem) {
  char buf[160];
  os << "sdp-problem v1\n";
  os << "blocks " << problem.layout.blocks.size() << "\n";
  for (const auto& b : problem.layout.blocks)
    os << b.name << " " << b.dim << "\n";

  std::size_t onnz = 0;
  for (std::size_t b = 0; b < problem.objective.size(); ++b) {
    const auto& c = problem.objective[b];
    for (int i = 0; i < c.rows(); ++i)
      for (int j = i; j < c.cols(); ++j)
        if (c(i, j) != 0.0) ++onnz;
  }
  os << "objective " << onnz << "\n";
  for (std::size_t b = 0; b < problem.objective.size(); ++b) {
    const auto& c = problem.objective[b];
    for (int i = 0; i < c.rows(); ++i)
      for (int j = i; j < c.cols(); ++j)
        if (c(i, j) != 0.0) {
          std::snprintf(buf, sizeof(buf), "%zu %d %d %.17g\n", b, i, j, c(i, j));
          os << buf;
        }
  }

  os << "constraints " << problem.constraints.n_rows() << "\n";
  for (int r = 0; r < problem.constraints.n_rows(); ++r) {
    const auto& row = problem.constraints.rows[r];
    os << "row " << r << " " << row.entries.size() << " ";
    std::snprintf(buf, sizeof(buf), "%.17g\n", row.rhs);
    os << buf;
    for (const auto& [coord, alpha] : row.entries) {
      // emit in value space: block, i, j, coefficient on X_block[i,j]
      int b = 0;
      while (coord >= problem.layout.svec_offset(b + 1)) ++b;
      int local = coord - problem.layout.svec_offset(b);
      const int d = problem.layout.blocks[b].dim;
      int i = 0;
      while (local >= d - i) {
        local -= d - i;
        ++i;
      }
      const int j = i + local;
      const double value = (i == j) ? alpha : alpha * kSqrt2;
      std::snprintf(buf, sizeof(buf), "%d %d %d %.17g\n", b, i, j, value);
      os << buf;
    }
  }
}

SdpProblem load_problem(std::istream& is) {
  SdpProblem p;
  std::string tag, version;
  is >> tag >> version;
  if (tag != "sdp-problem" || version != "v1")
    throw std::invalid_argument("load_problem: bad header");

  std::size_t nblocks = 0;
  is >> tag >> nblocks;
  if (tag != "blocks") throw std::invalid_argument("load_problem: expected blocks");
  for (std::size_t b = 0; b < nblocks; ++b) {
    BlockInfo info;
    is >> info.name >> info.dim;
    p.layout.blocks.push_back(info);
  }
  p.constraints.layout = p.layout;

  for (std::size_t b = 0; b < nblocks; ++b)
    p.objective.push_back(
        Eigen::MatrixXd::Zero(p.layout.blocks[b].dim, p.layout.blocks[b].dim));

  std::size_t onnz = 0;
  is >> tag >> onnz;
  if (tag != "objective")
    throw std::invalid_argument("load_problem: expected objective");
  for (std::size_t k = 0; k < onnz; ++k) {
    std::size_t b;
    int i, j;
    double v;
    is >> b >> i >> j >> v;
    p.objective[b](i, j) = v;
    p.objective[b](j, i) = v;
  }

  int nrows = 0;
  is >> tag >> nrows;
  if (tag != "constraints")
    throw std::invalid_argument("load_problem: expected constraints");
  for (int r = 0; r < nrows; ++r) {
    int rid = 0;
    std::size_t nnz = 0;
    ConstraintRow row;
    is >> tag >> rid >> nnz >> row.rhs;
    if (tag != "row") throw std::invalid_argument("load_problem: expected row");
    for (std::size_t k = 0; k < nnz; ++k) {
      int b, i, j;
      double value;
      is >> b >> i >> j >> value;
      const double alpha = (i == j) ? value : value / kSqrt2;
      row.entries.emplace_back(p.layout.coord(b, i, j), alpha);
    }
    p.constraints.rows.push_back(std::move(row));
  }
  return p;
}

}  // namespace v2rdm
