#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "subspace/data.hpp"

namespace testing {

inline Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  return M;
}

inline Eigen::MatrixXd centered(Eigen::MatrixXd X) {
  X.rowwise() -= X.colwise().mean();
  return X;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::MatrixXd A = gaussian(rng, n, n);
  return 0.5 * (A + A.transpose());
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Labels 0..c-1 with every class present, shuffled.
inline std::vector<int> random_labels(std::mt19937_64& rng, int n, int c) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % c;
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

// Orthonormal n x k matrix from the QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthonormal(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(rng, n, k));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
}

// Symmetric nonnegative block-diagonal weights with `blocks` connected blocks
// (each block gets a random spanning path plus random extra edges), then
// randomly permuted.
inline Eigen::MatrixXd random_block_graph(std::mt19937_64& rng, int n, int blocks) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  auto link = [&](int a, int b, double w) {
    const int i = perm[static_cast<std::size_t>(a)], j = perm[static_cast<std::size_t>(b)];
    S(i, j) = S(j, i) = w;
  };
  int start = 0;
  for (int b = 0; b < blocks; ++b) {
    const int size = n / blocks + (b < n % blocks ? 1 : 0);
    for (int i = start + 1; i < start + size; ++i) link(i - 1, i, uniform(rng, 0.1, 1.0));
    for (int e = 0; e < size; ++e) {
      const int i = start + uniform_int(rng, 0, size - 1);
      const int j = start + uniform_int(rng, 0, size - 1);
      if (i != j) link(i, j, uniform(rng, 0.1, 1.0));
    }
    start += size;
  }
  return S;
}

// Brute-force reference for the per-row simplex problem: value of
// gamma ||s||^2 + d^T s.
inline double simplex_objective(const Eigen::VectorXd& d, const Eigen::VectorXd& s, double gamma) {
  return gamma * s.squaredNorm() + d.dot(s);
}

}  // namespace testing
