#pragma once

#include <Eigen/Dense>

#include "subspace/model.hpp"

namespace subspace {

/// Classic PCA: W holds the k leading eigenvectors of X^T X (orthonormal,
/// descending variance). X must be column-centered.
ReductionModel fit_pca(const Eigen::MatrixXd& X, Eigen::Index k);

/// Sample-space PCA: Q holds the k leading eigenvectors of X X^T and
/// W = X^T Q, i.e. the PCA directions scaled by their singular values.
ReductionModel fit_vpca(const Eigen::MatrixXd& X, Eigen::Index k);

/// Keeps the first k features: W = I_{d x k}.
ReductionModel fit_baseline(Eigen::Index d, Eigen::Index k);

/// Throws ValidationError unless every column mean is within tol of zero
/// (relative to the largest absolute entry).
void require_centered(const Eigen::MatrixXd& X, double tol = 1e-8);

/// Subtracts the column means in place and returns them.
Eigen::RowVectorXd center_columns(Eigen::MatrixXd& X);

}  // namespace subspace
