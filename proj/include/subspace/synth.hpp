#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "subspace/data.hpp"

namespace subspace {

/// Gaussian class clusters for tests and demos.
///
/// Class means sit `separation` within-class standard deviations apart
/// inside the informative block (on a scaled simplex when
/// d_informative >= c, otherwise on a line along the first informative axis).
/// The remaining d_noise columns are pure N(0, noise_sigma^2) noise. With
/// informative_last the noise columns come first.
struct BlobSpec {
  int n_per_class = 50;
  int c = 2;
  int d_informative = 2;
  int d_noise = 0;
  double separation = 8.0;
  std::uint64_t seed = 0;
  double noise_sigma = 1.0;
  bool informative_last = false;
};

/// Deterministic per seed. Labels are 0..c-1 in blocks of n_per_class.
Dataset make_blobs(const BlobSpec& spec);

/// Reference solver for min gamma ||s||^2 + d^T s over the probability
/// simplex: projected gradient with a bisection-based projection, run until
/// the Frank-Wolfe duality gap drops below 1e-10 (relative to the data
/// scale). Independent of the sort-based closed form. Throws NumericError if
/// it fails to converge.
Eigen::VectorXd qp_simplex_oracle(const Eigen::VectorXd& d, double gamma);

/// Connected components of the graph with edges S_ij > edge_tol (union-find).
int count_components(const Eigen::MatrixXd& S, double edge_tol = 0.0);

/// Component id per vertex (ids in order of first appearance).
std::vector<int> component_labels(const Eigen::MatrixXd& S, double edge_tol = 0.0);

}  // namespace subspace
