#pragma once

#include <optional>

#include <Eigen/Dense>

#include "subspace/graph.hpp"
#include "subspace/linalg.hpp"

namespace subspace {

struct PcanParams {
  Eigen::Index k = 10;
  int c = 2;  // target number of clusters
  int m = kDefaultNeighbors;
  double eps = kDefaultEps;
  double tol = 1e-3;
  int max_iter = 500;
  /// Added to X^T X before the generalized eigenproblem. Defaults to
  /// 1e-8 * Tr(X^T X) / d.
  std::optional<double> ridge;
};

/// Projected clustering with adaptive neighbors (unsupervised).
///
/// Each iteration symmetrizes S, builds its Laplacian, takes W from the
/// generalized trailing eigenproblem and F from the c trailing Laplacian
/// eigenvectors, then lets rank_adjust move lambda. On convergence the
/// returned graph has exactly c connected components. If lambda never
/// settles within max_iter, the iterate with the lowest clustering objective
/// is returned and diagnostics.converged is false.
GraphFit fit_pcan(const Eigen::MatrixXd& X, const PcanParams& params);

/// Minimizes Tr(W^T X^T L X W) subject to W^T (X^T X + ridge I) W = I_k.
Eigen::MatrixXd generalized_trailing_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& L,
                                          Eigen::Index k, double ridge);

/// sum_ij (dx_ij + lambda df_ij) S_ij + gamma_i S_ij^2 with gamma_i the
/// per-row optimum for those combined distances. S should be symmetric.
double pcan_objective(const Eigen::MatrixXd& projected, const Eigen::MatrixXd& F,
                      const Eigen::MatrixXd& S, double lambda, int m);

/// Default ridge for X: 1e-8 * Tr(X^T X) / d, floored at 1e-12.
double default_ridge(const Eigen::MatrixXd& X);

}  // namespace subspace
