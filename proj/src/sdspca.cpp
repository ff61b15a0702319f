#include "subspace/sdspca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "subspace/data.hpp"
#include "subspace/errors.hpp"
#include "subspace/pca.hpp"

namespace subspace {

namespace {

void validate(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const SdspcaParams& p) {
  require_finite(X, "data matrix");
  require_centered(X);
  require_one_hot(Y, X.rows());
  if (p.k < 1 || p.k > std::min(X.rows(), X.cols())) {
    throw ParameterError("subspace dimension k=" + std::to_string(p.k) + " outside [1, min(n,d)]");
  }
  if (p.alpha < 0.0 || p.beta < 0.0) throw ParameterError("alpha and beta must be nonnegative");
  if (!(p.tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (p.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  if (!(p.eps > 0.0)) throw ParameterError("eps must be positive");
}

ReductionModel run(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const SdspcaParams& p,
                   Eigen::MatrixXd Q_prev, Eigen::VectorXd D) {
  const Eigen::MatrixXd Z0 = -(X * X.transpose()) - p.alpha * (Y * Y.transpose());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  ReductionModel model;
  model.k = p.k;
  model.diagnostics.converged = false;
  Eigen::MatrixXd Q;
  for (int t = 1; t <= p.max_iter; ++t) {
    Eigen::MatrixXd Z = Z0;
    Z.diagonal() += p.beta * D;
    Q = trailing_eigvecs(Z, p.k);
    model.diagnostics.iterations = t;
    model.diagnostics.trace.push_back({t, sdspca_objective(X, Y, Q, p.alpha, p.beta), nan});
    if (l11_norm(Q - Q_prev) < p.tol) {
      model.diagnostics.converged = true;
      break;
    }
    D = reweight_diag(Q, p.eps);
    Q_prev = Q;
  }
  model.W = X.transpose() * Q;
  model.Q = std::move(Q);
  return model;
}

}  // namespace

void require_orthonormal(const Eigen::MatrixXd& Q, double tol) {
  const Eigen::Index k = Q.cols();
  const double err = (Q.transpose() * Q - Eigen::MatrixXd::Identity(k, k)).norm();
  if (!(err <= tol * std::max<double>(1.0, std::sqrt(static_cast<double>(k))))) {
    throw ParameterError("Q does not have orthonormal columns (||Q^T Q - I||_F = " +
                         std::to_string(err) + ")");
  }
}

double sdspca_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                        const Eigen::MatrixXd& Q, double alpha, double beta) {
  if (Q.rows() != X.rows() || Y.rows() != X.rows()) {
    throw DimensionError("objective: X, Y and Q must have the same number of rows");
  }
  require_orthonormal(Q);
  const double data_term = (X - Q * (Q.transpose() * X)).squaredNorm();
  const double label_term = (Y - Q * (Q.transpose() * Y)).squaredNorm();
  return data_term + alpha * label_term + beta * l21_norm(Q);
}

ReductionModel fit_sdspca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const SdspcaParams& params) {
  validate(X, Y, params);
  return run(X, Y, params, Eigen::MatrixXd::Zero(X.rows(), params.k),
             Eigen::VectorXd::Ones(X.rows()));
}

ReductionModel fit_sdspca(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const SdspcaParams& params, const Eigen::MatrixXd& warm_start_q) {
  validate(X, Y, params);
  if (warm_start_q.rows() != X.rows() || warm_start_q.cols() != params.k) {
    throw DimensionError("warm start Q must be n x k");
  }
  return run(X, Y, params, warm_start_q, reweight_diag(warm_start_q, params.eps));
}

}  // namespace subspace
