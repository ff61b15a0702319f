#pragma once

#include <Eigen/Dense>

namespace subspace {

/// Machine epsilon for doubles (2^-52); default for the L2,1 reweighting
/// and for the simplex denominator guard.
inline constexpr double kDefaultEps = 0x1p-52;

/// Full eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are ascending and column j of `eigenvectors` pairs with
/// eigenvalue j. Each eigenvector is sign-normalized so that its
/// largest-magnitude entry is positive (lowest index wins ties), which makes
/// repeated factorizations of the same matrix bitwise reproducible.
/// Within a degenerate eigenvalue only the spanned subspace is meaningful.
struct SymmetricSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Full SVD, X = U * diag(sigma) * R^T with sigma descending.
struct SvdFactors {
  Eigen::MatrixXd U;      // n x n
  Eigen::VectorXd sigma;  // min(n, d)
  Eigen::MatrixXd R;      // d x d
};

SymmetricSpectrum sym_eig(const Eigen::MatrixXd& A);

/// Eigenvalues only, ascending. Same preconditions as sym_eig.
Eigen::VectorXd sym_eigvals(const Eigen::MatrixXd& A);

/// Eigenvectors of the k smallest eigenvalues, ascending order.
Eigen::MatrixXd trailing_eigvecs(const Eigen::MatrixXd& A, Eigen::Index k);

/// Eigenvectors of the k largest eigenvalues, descending order.
Eigen::MatrixXd leading_eigvecs(const Eigen::MatrixXd& A, Eigen::Index k);

SvdFactors svd(const Eigen::MatrixXd& X);

/// Sum of row Euclidean norms.
double l21_norm(const Eigen::MatrixXd& Q);

/// Sum of absolute entries.
double l11_norm(const Eigen::MatrixXd& Q);

/// Diagonal of the L2,1 reweighting matrix: D_ii = 1 / (2 sqrt(||q_i||^2 + eps)).
/// Returned as a vector; use `.asDiagonal()` for the matrix form.
Eigen::VectorXd reweight_diag(const Eigen::MatrixXd& Q, double eps = kDefaultEps);

/// L = diag(S 1) - S for a square nonnegative (normally symmetric) S.
Eigen::MatrixXd laplacian(const Eigen::MatrixXd& S);

/// Row-wise squared Euclidean distances between the rows of P.
Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& P);

/// Flips column signs in place so the largest-magnitude entry of each column
/// is positive (lowest row index breaks ties).
void normalize_column_signs(Eigen::MatrixXd& V);

/// Largest principal angle (radians) between the column spans of A and B.
/// Both inputs need full column rank and the same number of rows. Computed
/// through the sine so angles near zero keep full precision.
double max_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Throws NumericError if any entry is NaN or infinite.
void require_finite(const Eigen::MatrixXd& A, const char* what);

}  // namespace subspace
