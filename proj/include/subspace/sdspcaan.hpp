#pragma once

#include <functional>

#include <Eigen/Dense>

#include "subspace/graph.hpp"
#include "subspace/linalg.hpp"

namespace subspace {

enum class GraphVariant {
  Full,        // SDSPCAAN: adaptive graph plus global terms
  FixedGraph,  // SDSPCA-LPP: graph frozen at its initial value
  SpcanOnly,   // SPCAN: Q-step keeps only the graph term
};

/// Snapshot handed to an observer after each Q-step and S-step.
/// Pointers are null when the corresponding step did not run.
struct IterationProbe {
  int iter = 0;
  double lambda = 0.0;                          // lambda used for the S-step distances
  const Eigen::MatrixXd* Z = nullptr;           // Q-step matrix
  const Eigen::MatrixXd* Q_prev = nullptr;      // previous Q (zero at t = 1)
  const Eigen::MatrixXd* Q = nullptr;           // new Q
  const Eigen::MatrixXd* distances = nullptr;   // combined distances of the S-step
  const Eigen::MatrixXd* S_prev = nullptr;      // row-stochastic S before the S-step
  const Eigen::MatrixXd* S = nullptr;           // row-stochastic S after the S-step
};

struct SdspcaanParams {
  Eigen::Index k = 10;
  int m = kDefaultNeighbors;
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 1.0;
  double eps = kDefaultEps;
  double tol = 1e-3;
  int max_iter = 500;
  GraphVariant variant = GraphVariant::Full;
  std::function<void(const IterationProbe&)> observer;
};

/// Joint optimization of Q and the adaptive-neighbor graph S.
///
/// Per iteration: symmetrize S, L = laplacian(S),
/// Z = -X X^T - alpha Y Y^T + beta D + delta X X^T L X X^T, Q <- k trailing
/// eigenvectors of Z. Lambda is doubled/halved from the Laplacian spectrum
/// first; only when it holds steady is ||Q - Q_prev||_{1,1} < tol allowed to
/// stop the loop. Then D is reweighted and S rebuilt from distances between
/// rows of X X^T Q plus lambda times the one-hot label distances.
///
/// delta = 0 skips all graph work and reproduces SDSPCA. FixedGraph keeps
/// the initial S and stops on the Q test alone (lambda has no effect there).
/// SpcanOnly uses Z = X X^T L X X^T. Returns W = X^T Q.
GraphFit fit_sdspcaan(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const SdspcaanParams& params);

/// SpcanOnly variant; alpha, beta and delta are ignored.
GraphFit fit_spcan(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, SdspcaanParams params);

/// ||X - QQ^T X||^2 + alpha ||Y - QQ^T Y||^2 + beta ||Q||_{2,1}
///   + delta/2 [2 Tr(Q^T X X^T L X X^T Q) + Tr(S^T Gamma S) + 2 lambda Tr(Y^T L Y)]
/// with L the Laplacian of the symmetrized S and Gamma the per-row optimal
/// gammas of the current combined distances (graph.m neighbors).
double sdspcaan_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const Eigen::MatrixXd& Q, const SimilarityGraph& graph, double alpha,
                          double beta, double delta, double lambda);

/// The bracketed graph terms alone (without the delta/2 factor).
double graph_terms(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Q,
                   const SimilarityGraph& graph, double lambda);

/// ||y_i - y_j||^2 for one-hot rows: 0 within a class, 2 across.
Eigen::MatrixXd label_sq_dists(const Eigen::MatrixXd& Y);

}  // namespace subspace
