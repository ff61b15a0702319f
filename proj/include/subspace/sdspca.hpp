#pragma once

#include <Eigen/Dense>

#include "subspace/linalg.hpp"
#include "subspace/model.hpp"

namespace subspace {

struct SdspcaParams {
  Eigen::Index k = 10;
  double alpha = 1.0;  // label reconstruction weight
  double beta = 1.0;   // row-sparsity weight
  double eps = kDefaultEps;
  double tol = 1e-3;
  int max_iter = 500;
};

/// Supervised discriminative sparse PCA.
///
/// Alternates Q <- k trailing eigenvectors of -X X^T - alpha Y Y^T + beta D
/// with the L2,1 reweighting of D, stopping once ||Q - Q_prev||_{1,1} < tol.
/// The convergence test runs before D is refreshed, so D always lags Q by
/// one step. Returns W = X^T Q and keeps Q in the model; the trace records
/// the reconstruction objective after every Q update.
ReductionModel fit_sdspca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const SdspcaParams& params);

/// Restarts the iteration from a previous Q (D is rebuilt from it).
ReductionModel fit_sdspca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const SdspcaParams& params, const Eigen::MatrixXd& warm_start_q);

/// ||X - Q Q^T X||_F^2 + alpha ||Y - Q Q^T Y||_F^2 + beta ||Q||_{2,1}.
/// Q must have orthonormal columns.
double sdspca_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                        const Eigen::MatrixXd& Q, double alpha, double beta);

/// Throws ParameterError unless Q^T Q = I within tol.
void require_orthonormal(const Eigen::MatrixXd& Q, double tol = 1e-8);

}  // namespace subspace
