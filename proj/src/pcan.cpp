#include "subspace/pcan.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "subspace/errors.hpp"
#include "subspace/pca.hpp"

namespace subspace {

double default_ridge(const Eigen::MatrixXd& X) {
  const double r = X.cols() > 0 ? 1e-8 * X.squaredNorm() / static_cast<double>(X.cols()) : 0.0;
  return std::max(r, 1e-12);
}

Eigen::MatrixXd generalized_trailing_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& L,
                                          Eigen::Index k, double ridge) {
  const Eigen::Index d = X.cols();
  if (k < 1 || k > d) {
    throw ParameterError("projection dimension k=" + std::to_string(k) + " outside [1, d=" +
                         std::to_string(d) + "]");
  }
  if (L.rows() != X.rows() || L.cols() != X.rows()) {
    throw DimensionError("Laplacian must be n x n for an n-row data matrix");
  }
  if (!(ridge > 0.0)) throw ParameterError("ridge must be positive");

  Eigen::MatrixXd A = X.transpose() * L * X;
  A = (0.5 * (A + A.transpose())).eval();
  Eigen::MatrixXd B = X.transpose() * X;
  B.diagonal().array() += ridge;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw NumericError("generalized eigenproblem failed");
  }
  Eigen::MatrixXd W = solver.eigenvectors().leftCols(k);
  normalize_column_signs(W);
  return W;
}

double pcan_objective(const Eigen::MatrixXd& projected, const Eigen::MatrixXd& F,
                      const Eigen::MatrixXd& S, double lambda, int m) {
  const Eigen::MatrixXd D = pairwise_sq_dists(projected) + lambda * pairwise_sq_dists(F);
  return similarity_objective(D, S, optimal_gammas(D, m));
}

GraphFit fit_pcan(const Eigen::MatrixXd& X, const PcanParams& p) {
  require_finite(X, "data matrix");
  require_centered(X);
  const Eigen::Index n = X.rows();
  if (p.k < 1 || p.k > X.cols()) throw ParameterError("PCAN needs 1 <= k <= d");
  if (p.c < 2 || p.c >= n) {
    throw ValidationError("cluster count c=" + std::to_string(p.c) + " outside [2, n-1]");
  }
  if (p.m < 1 || p.m > n - 2) throw ParameterError("PCAN needs 1 <= m <= n-2");
  if (!(p.tol > 0.0) || p.max_iter < 1) throw ParameterError("bad tolerance or iteration cap");
  const double ridge = p.ridge.value_or(default_ridge(X));

  Eigen::MatrixXd S = update_similarity(pairwise_sq_dists(X), p.m, p.eps).S;
  RankControlState rank{1.0, p.tol, p.c, {0.0, 0.0}};

  GraphFit best;
  double best_objective = std::numeric_limits<double>::infinity();
  double best_lambda = rank.lambda;

  GraphFit out;
  out.model.k = p.k;
  out.model.diagnostics.converged = false;
  for (int t = 1; t <= p.max_iter; ++t) {
    S = symmetrize(S);
    const Eigen::MatrixXd L = laplacian(S);
    const Eigen::MatrixXd W = generalized_trailing_step(X, L, p.k, ridge);
    const SymmetricSpectrum spec = sym_eig(L);
    const Eigen::MatrixXd F = spec.eigenvectors.leftCols(p.c);
    const Eigen::MatrixXd projected = X * W;

    const double lambda = rank.lambda;
    const double objective = pcan_objective(projected, F, S, lambda, p.m);
    out.model.diagnostics.trace.push_back({t, objective, lambda});
    out.model.diagnostics.iterations = t;
    if (objective < best_objective) {
      best_objective = objective;
      best.model.W = W;
      best.graph = {S, p.m};
      best_lambda = lambda;
    }

    if (rank_adjust(rank, spec.eigenvalues) == RankStep::Converged) {
      out.model.W = W;
      out.graph = {S, p.m};
      out.model.diagnostics.converged = true;
      out.model.diagnostics.final_lambda = lambda;
      return out;
    }

    const Eigen::MatrixXd D =
        pairwise_sq_dists(projected) + rank.lambda * pairwise_sq_dists(F);
    S = update_similarity(D, p.m, p.eps).S;
  }

  out.model.W = std::move(best.model.W);
  out.graph = std::move(best.graph);
  out.model.diagnostics.final_lambda = best_lambda;
  return out;
}

}  // namespace subspace
