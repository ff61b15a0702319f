#include "subspace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "subspace/errors.hpp"

namespace subspace {

Dataset make_blobs(const BlobSpec& spec) {
  if (spec.n_per_class < 1 || spec.c < 1 || spec.d_informative < 1 || spec.d_noise < 0) {
    throw ParameterError("blob spec needs positive counts");
  }
  if (spec.separation < 0.0) throw ParameterError("blob separation must be nonnegative");

  const int n = spec.n_per_class * spec.c;
  const int d = spec.d_informative + spec.d_noise;
  const int info_offset = spec.informative_last ? spec.d_noise : 0;
  const int noise_offset = spec.informative_last ? 0 : spec.d_informative;

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(spec.c, spec.d_informative);
  for (int j = 0; j < spec.c; ++j) {
    if (spec.d_informative >= spec.c) {
      means(j, j) = spec.separation / std::sqrt(2.0);
    } else {
      means(j, 0) = spec.separation * j;
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset out;
  out.X.resize(n, d);
  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i / spec.n_per_class;
    out.labels[static_cast<std::size_t>(i)] = label;
    for (int j = 0; j < spec.d_informative; ++j) {
      out.X(i, info_offset + j) = means(label, j) + normal(rng);
    }
    for (int j = 0; j < spec.d_noise; ++j) {
      out.X(i, noise_offset + j) = spec.noise_sigma * normal(rng);
    }
  }
  out.Y = one_hot(out.labels, spec.c);
  for (int j = 0; j < spec.c; ++j) out.class_names.push_back("class" + std::to_string(j));
  return out;
}

namespace {

// Euclidean projection onto the probability simplex by bisection on the
// threshold tau in sum_i max(v_i - tau, 0) = 1.
Eigen::VectorXd project_simplex_bisect(const Eigen::VectorXd& v) {
  double lo = v.minCoeff() - 1.0;  // mass >= 1 here
  double hi = v.maxCoeff();        // mass == 0 here
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double mass = (v.array() - mid).max(0.0).sum();
    (mass >= 1.0 ? lo : hi) = mid;
  }
  Eigen::VectorXd s = (v.array() - lo).max(0.0);
  const double total = s.sum();
  return total > 0.0 ? Eigen::VectorXd(s / total) : s;
}

}  // namespace

Eigen::VectorXd qp_simplex_oracle(const Eigen::VectorXd& d, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("QP oracle needs gamma > 0");
  if (d.size() == 0) throw ParameterError("QP oracle needs a nonempty vector");
  const Eigen::Index n = d.size();
  // Hessian 2*gamma*I with step 1/(4 gamma): each step halves the distance to
  // the optimum, so the step length bounds the remaining error.
  const double step = 1.0 / (4.0 * gamma);

  Eigen::VectorXd s = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 20000; ++it) {
    const Eigen::VectorXd grad = 2.0 * gamma * s + d;
    Eigen::VectorXd next = project_simplex_bisect(s - step * grad);
    const double change = (next - s).cwiseAbs().maxCoeff();
    s = std::move(next);
    if (change <= 1e-13) return s;
  }
  throw NumericError("QP simplex oracle did not converge");
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

std::vector<int> component_labels(const Eigen::MatrixXd& S, double edge_tol) {
  if (S.rows() != S.cols()) throw DimensionError("component count needs a square matrix");
  const int n = static_cast<int>(S.rows());
  DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (S(i, j) > edge_tol || S(j, i) > edge_tol) sets.unite(i, j);
    }
  }
  std::vector<int> root_id(static_cast<std::size_t>(n), -1);
  std::vector<int> out(static_cast<std::size_t>(n));
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = sets.find(i);
    if (root_id[static_cast<std::size_t>(r)] < 0) root_id[static_cast<std::size_t>(r)] = next++;
    out[static_cast<std::size_t>(i)] = root_id[static_cast<std::size_t>(r)];
  }
  return out;
}

int count_components(const Eigen::MatrixXd& S, double edge_tol) {
  const std::vector<int> ids = component_labels(S, edge_tol);
  return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
}

}  // namespace subspace
