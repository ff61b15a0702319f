#pragma once

#include <span>
#include <utility>

#include <Eigen/Dense>

#include "subspace/linalg.hpp"
#include "subspace/model.hpp"

namespace subspace {

/// Row-stochastic adaptive-neighbor graph. Row i holds the similarities of
/// sample i to every other sample; the diagonal is always zero.
struct SimilarityGraph {
  Eigen::MatrixXd S;
  int m = 0;  // neighbors per row used to build S
};

/// Projection plus the graph learned alongside it.
struct GraphFit {
  ReductionModel model;
  SimilarityGraph graph;
};

inline constexpr int kDefaultNeighbors = 5;
inline constexpr double kLambdaMin = 1e-8;
inline constexpr double kLambdaMax = 1e8;

/// One row of the closed-form simplex update.
///
/// `d` holds the combined distances of one sample to all samples; entries
/// equal to +infinity (the self entry) are excluded and receive zero mass.
/// With the finite candidates sorted ascending (stable by index) the weights
/// are (d_{m+1} - d_j)_+ / (m d_{m+1} - sum_{j<=m} d_j + eps).
///
/// The row is rescaled to sum exactly to one, which only removes the
/// eps-induced shortfall. If the m+1 nearest candidates all tie, the closed
/// form is 0/eps everywhere and the mass is spread uniformly over the m
/// nearest (index order) instead. A partial tie at the boundary leaves fewer
/// than m positive entries.
Eigen::VectorXd simplex_row(std::span<const double> d, int m, double eps = kDefaultEps);

/// Per-row optimal regularization weight for ascending distances:
/// (m/2) d_{m+1} - (1/2) sum_{j<=m} d_j.
double optimal_gamma(std::span<const double> sorted_d, int m);

/// Rebuilds every row of S from d_ij = Dx_ij + lambda * Df_ij (j != i).
SimilarityGraph update_similarity(const Eigen::MatrixXd& Dx, const Eigen::MatrixXd& Df,
                                  double lambda, int m, double eps = kDefaultEps);

/// Same as above with the combined distance matrix supplied directly.
SimilarityGraph update_similarity(const Eigen::MatrixXd& D, int m, double eps = kDefaultEps);

/// Per-row optimal gamma for a full distance matrix (diagonal ignored).
Eigen::VectorXd optimal_gammas(const Eigen::MatrixXd& D, int m);

/// sum_i gamma_i ||s_i||^2 + d_i^T s_i, the per-row similarity subproblem
/// summed over rows (diagonal of D ignored).
double similarity_objective(const Eigen::MatrixXd& D, const Eigen::MatrixXd& S,
                            const Eigen::VectorXd& gamma);

/// (S + S^T) / 2
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& S);

enum class RankStep { Doubled, Halved, Converged };

/// Bookkeeping for the lambda schedule that drives the Laplacian towards
/// exactly c zero eigenvalues.
struct RankControlState {
  double lambda = 1.0;
  double tol = 1e-3;
  int c = 2;
  std::pair<double, double> last_eig_sums{0.0, 0.0};  // (sum of c smallest, sum of c+1 smallest)
};

/// Doubles lambda while the c smallest Laplacian eigenvalues sum above tol,
/// halves it while even c+1 of them sum below tol, and reports convergence
/// otherwise. Lambda stays inside [kLambdaMin, kLambdaMax].
RankStep rank_adjust(RankControlState& state, const Eigen::VectorXd& eig_ascending);

/// Number of eigenvalues at or below `rel_tol * max(eigenvalue)`; counts
/// connected components when applied to a Laplacian spectrum.
int count_zero_eigenvalues(const Eigen::VectorXd& eig_ascending, double rel_tol = 1e-8);

}  // namespace subspace
