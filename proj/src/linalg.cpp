#include "subspace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "subspace/errors.hpp"

namespace subspace {

namespace {

constexpr double kAsymmetryTol = 1e-8;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw DimensionError("symmetric eigensolver needs a square matrix, got " +
                         std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  }
  require_finite(A, "symmetric eigensolver input");
  const double scale = A.norm();
  const double asym = (A - A.transpose()).norm();
  if (asym > kAsymmetryTol * scale) {
    throw DomainError("matrix is not symmetric: ||A - A^T||_F = " + std::to_string(asym));
  }
  return 0.5 * (A + A.transpose());
}

void check_count(Eigen::Index k, Eigen::Index n) {
  if (k < 1 || k > n) {
    throw ParameterError("eigenvector count " + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
  }
}

}  // namespace

void require_finite(const Eigen::MatrixXd& A, const char* what) {
  if (!A.allFinite()) {
    throw NumericError(std::string(what) + " contains non-finite entries");
  }
}

void normalize_column_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
      const double a = std::abs(V(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (V.rows() > 0 && V(pivot, j) < 0.0) V.col(j) = -V.col(j);
  }
}

SymmetricSpectrum sym_eig(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd S = symmetrized(A);
  const Eigen::Index n = S.rows();
  if (n == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigendecomposition did not converge");
  }
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) < vals(b); });

  SymmetricSpectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = vals(order[static_cast<std::size_t>(j)]);
    out.eigenvectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }
  normalize_column_signs(out.eigenvectors);
  return out;
}

Eigen::VectorXd sym_eigvals(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd S = symmetrized(A);
  if (S.rows() == 0) return Eigen::VectorXd(0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigendecomposition did not converge");
  }
  Eigen::VectorXd vals = solver.eigenvalues();
  std::sort(vals.begin(), vals.end());
  return vals;
}

Eigen::MatrixXd trailing_eigvecs(const Eigen::MatrixXd& A, Eigen::Index k) {
  check_count(k, A.rows());
  return sym_eig(A).eigenvectors.leftCols(k);
}

Eigen::MatrixXd leading_eigvecs(const Eigen::MatrixXd& A, Eigen::Index k) {
  check_count(k, A.rows());
  const SymmetricSpectrum spec = sym_eig(A);
  return spec.eigenvectors.rightCols(k).rowwise().reverse();
}

SvdFactors svd(const Eigen::MatrixXd& X) {
  require_finite(X, "svd input");
  Eigen::BDCSVD<Eigen::MatrixXd> solver(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdFactors out{solver.matrixU(), solver.singularValues(), solver.matrixV()};

  // Tie each left/right pair to the right vector's sign convention.
  const Eigen::Index r = out.sigma.size();
  for (Eigen::Index j = 0; j < out.R.cols(); ++j) {
    Eigen::Index pivot = 0;
    out.R.col(j).cwiseAbs().maxCoeff(&pivot);
    if (out.R(pivot, j) < 0.0) {
      out.R.col(j) = -out.R.col(j);
      if (j < r) out.U.col(j) = -out.U.col(j);
    }
  }
  if (out.U.cols() > r) {
    Eigen::MatrixXd tail = out.U.rightCols(out.U.cols() - r);
    normalize_column_signs(tail);
    out.U.rightCols(out.U.cols() - r) = tail;
  }
  return out;
}

double l21_norm(const Eigen::MatrixXd& Q) { return Q.rowwise().norm().sum(); }

double l11_norm(const Eigen::MatrixXd& Q) { return Q.cwiseAbs().sum(); }

Eigen::VectorXd reweight_diag(const Eigen::MatrixXd& Q, double eps) {
  if (!(eps > 0.0)) throw ParameterError("reweighting eps must be positive");
  Eigen::VectorXd d(Q.rows());
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    d(i) = 1.0 / (2.0 * std::sqrt(Q.row(i).squaredNorm() + eps));
  }
  return d;
}

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols()) throw DimensionError("laplacian needs a square similarity matrix");
  require_finite(S, "similarity matrix");
  if (S.size() > 0 && S.minCoeff() < 0.0) {
    throw DomainError("similarity matrix has negative entries");
  }
  Eigen::MatrixXd L = -S;
  L.diagonal() += S.rowwise().sum();
  return L;
}

Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& P) {
  const Eigen::Index n = P.rows();
  Eigen::MatrixXd D(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (P.row(i) - P.row(j)).squaredNorm();
      D(i, j) = v;
      D(j, i) = v;
    }
  }
  return D;
}

double max_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != B.rows()) throw DimensionError("principal angles need equal row counts");
  if (A.cols() == 0 || B.cols() == 0) return 0.0;
  const Eigen::MatrixXd Qa =
      Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ() *
      Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const Eigen::MatrixXd Qb =
      Eigen::HouseholderQR<Eigen::MatrixXd>(B).householderQ() *
      Eigen::MatrixXd::Identity(B.rows(), B.cols());
  const Eigen::MatrixXd residual = Qb - Qa * (Qa.transpose() * Qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> sv(residual);
  const double s = sv.singularValues().size() ? sv.singularValues()(0) : 0.0;
  return std::asin(std::min(1.0, s));
}

}  // namespace subspace
