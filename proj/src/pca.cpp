#include "subspace/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subspace/errors.hpp"
#include "subspace/linalg.hpp"

namespace subspace {

namespace {

constexpr double kRankTol = 1e-12;

void check_k(Eigen::Index k, Eigen::Index n, Eigen::Index d) {
  if (k < 1 || k > std::min(n, d)) {
    throw ParameterError("subspace dimension k=" + std::to_string(k) + " outside [1, min(n,d)=" +
                         std::to_string(std::min(n, d)) + "]");
  }
}

// Replaces the columns flagged in `missing` with unit vectors orthogonal to
// all other columns, drawn deterministically from the canonical basis.
void complete_orthonormal(Eigen::MatrixXd& B, const std::vector<bool>& missing) {
  Eigen::Index candidate = 0;
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    if (!missing[static_cast<std::size_t>(j)]) continue;
    B.col(j).setZero();
    for (; candidate < B.rows(); ++candidate) {
      Eigen::VectorXd v = Eigen::VectorXd::Unit(B.rows(), candidate);
      for (int pass = 0; pass < 2; ++pass) v -= B * (B.transpose() * v);
      if (v.norm() > 1e-6) {
        B.col(j) = v.normalized();
        ++candidate;
        break;
      }
    }
  }
}

// Maps leading eigenvectors V of one Gram matrix to unit-norm singular
// vectors on the other side: out_j = M V_j / sigma_j.
Eigen::MatrixXd convert_side(const Eigen::MatrixXd& M, const Eigen::MatrixXd& V) {
  Eigen::MatrixXd out = M * V;
  const Eigen::VectorXd norms = out.colwise().norm().transpose();
  const double top = norms.size() ? norms.maxCoeff() : 0.0;
  std::vector<bool> missing(static_cast<std::size_t>(out.cols()), false);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (norms(j) <= kRankTol * std::max(top, 1.0)) {
      missing[static_cast<std::size_t>(j)] = true;
    } else {
      out.col(j) /= norms(j);
    }
  }
  complete_orthonormal(out, missing);
  return out;
}

}  // namespace

Eigen::MatrixXd transform(const ReductionModel& model, const Eigen::MatrixXd& X_new) {
  if (X_new.cols() != model.W.rows()) {
    throw DimensionError("transform: input has " + std::to_string(X_new.cols()) +
                         " columns, model expects " + std::to_string(model.W.rows()));
  }
  return X_new * model.W;
}

void require_centered(const Eigen::MatrixXd& X, double tol) {
  if (X.rows() == 0) return;
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  const double worst = X.colwise().mean().cwiseAbs().maxCoeff();
  if (worst > tol * scale) {
    throw ValidationError("data matrix is not column-centered (max |mean| = " +
                          std::to_string(worst) + ")");
  }
}

Eigen::RowVectorXd center_columns(Eigen::MatrixXd& X) {
  const Eigen::RowVectorXd mean = X.colwise().mean();
  X.rowwise() -= mean;
  return mean;
}

ReductionModel fit_pca(const Eigen::MatrixXd& X, Eigen::Index k) {
  require_finite(X, "data matrix");
  require_centered(X);
  check_k(k, X.rows(), X.cols());

  ReductionModel model;
  model.k = k;
  if (X.cols() <= X.rows()) {
    model.W = leading_eigvecs(X.transpose() * X, k);
  } else {
    const Eigen::MatrixXd Q = leading_eigvecs(X * X.transpose(), k);
    model.W = convert_side(X.transpose(), Q);
    normalize_column_signs(model.W);
  }
  return model;
}

ReductionModel fit_vpca(const Eigen::MatrixXd& X, Eigen::Index k) {
  require_finite(X, "data matrix");
  require_centered(X);
  check_k(k, X.rows(), X.cols());

  Eigen::MatrixXd Q;
  if (X.rows() <= X.cols()) {
    Q = leading_eigvecs(X * X.transpose(), k);
  } else {
    const Eigen::MatrixXd R = leading_eigvecs(X.transpose() * X, k);
    Q = convert_side(X, R);
    normalize_column_signs(Q);
  }
  ReductionModel model;
  model.k = k;
  model.W = X.transpose() * Q;
  model.Q = std::move(Q);
  return model;
}

ReductionModel fit_baseline(Eigen::Index d, Eigen::Index k) {
  if (k < 1 || k > d) {
    throw ParameterError("baseline needs 1 <= k <= d, got k=" + std::to_string(k) +
                         ", d=" + std::to_string(d));
  }
  ReductionModel model;
  model.k = k;
  model.W = Eigen::MatrixXd::Identity(d, k);
  return model;
}

}  // namespace subspace
