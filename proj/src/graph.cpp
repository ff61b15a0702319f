#include "subspace/graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "subspace/errors.hpp"

namespace subspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Indices of the finite entries of d, stably sorted by distance.
std::vector<std::size_t> sorted_candidates(std::span<const double> d) {
  std::vector<std::size_t> idx;
  idx.reserve(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (std::isnan(d[j])) throw NumericError("distance vector contains NaN");
    if (std::isfinite(d[j])) idx.push_back(j);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return idx;
}

void check_neighbors(int m, std::size_t candidates) {
  if (m < 1 || static_cast<std::size_t>(m) + 1 > candidates) {
    throw ParameterError("neighbor count m=" + std::to_string(m) + " needs at least m+1 = " +
                         std::to_string(m + 1) + " candidates, have " +
                         std::to_string(candidates));
  }
}

}  // namespace

Eigen::VectorXd simplex_row(std::span<const double> d, int m, double eps) {
  const auto order = sorted_candidates(d);
  check_neighbors(m, order.size());
  if (!(eps > 0.0)) throw ParameterError("simplex eps must be positive");

  const auto mm = static_cast<std::size_t>(m);
  const double next = d[order[mm]];
  double prefix = 0.0;
  for (std::size_t j = 0; j < mm; ++j) prefix += d[order[j]];
  const double denom = static_cast<double>(m) * next - prefix + eps;

  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.size()));
  double total = 0.0;
  for (std::size_t j = 0; j < mm; ++j) {
    const double v = std::max(0.0, (next - d[order[j]]) / denom);
    s(static_cast<Eigen::Index>(order[j])) = v;
    total += v;
  }
  if (total > 0.0) {
    s /= total;
  } else {
    // m+1 nearest are tied.
    for (std::size_t j = 0; j < mm; ++j) {
      s(static_cast<Eigen::Index>(order[j])) = 1.0 / static_cast<double>(m);
    }
  }
  return s;
}

double optimal_gamma(std::span<const double> sorted_d, int m) {
  check_neighbors(m, sorted_d.size());
  assert(std::is_sorted(sorted_d.begin(), sorted_d.end()) && "distances must be ascending");
  const auto mm = static_cast<std::size_t>(m);
  double prefix = 0.0;
  for (std::size_t j = 0; j < mm; ++j) prefix += sorted_d[j];
  return 0.5 * static_cast<double>(m) * sorted_d[mm] - 0.5 * prefix;
}

SimilarityGraph update_similarity(const Eigen::MatrixXd& D, int m, double eps) {
  const Eigen::Index n = D.rows();
  if (D.cols() != n) throw DimensionError("distance matrix must be square");
  if (m < 1 || m > n - 2) {
    throw ParameterError("neighbor count m=" + std::to_string(m) + " outside [1, n-2] for n=" +
                         std::to_string(n));
  }
  SimilarityGraph g{Eigen::MatrixXd::Zero(n, n), m};
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = D(i, j);
    row[static_cast<std::size_t>(i)] = kInf;
    g.S.row(i) = simplex_row(row, m, eps).transpose();
  }
  return g;
}

SimilarityGraph update_similarity(const Eigen::MatrixXd& Dx, const Eigen::MatrixXd& Df,
                                  double lambda, int m, double eps) {
  if (Dx.rows() != Df.rows() || Dx.cols() != Df.cols()) {
    throw DimensionError("projected and label distance matrices differ in shape");
  }
  return update_similarity(Dx + lambda * Df, m, eps);
}

Eigen::VectorXd optimal_gammas(const Eigen::MatrixXd& D, int m) {
  const Eigen::Index n = D.rows();
  if (D.cols() != n) throw DimensionError("distance matrix must be square");
  Eigen::VectorXd gamma(n);
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row.push_back(D(i, j));
    }
    std::sort(row.begin(), row.end());
    gamma(i) = optimal_gamma(row, m);
  }
  return gamma;
}

double similarity_objective(const Eigen::MatrixXd& D, const Eigen::MatrixXd& S,
                            const Eigen::VectorXd& gamma) {
  if (D.rows() != S.rows() || D.cols() != S.cols() || gamma.size() != S.rows()) {
    throw DimensionError("similarity objective shape mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
      if (i == j) continue;
      total += D(i, j) * S(i, j) + gamma(i) * S(i, j) * S(i, j);
    }
  }
  return total;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols()) throw DimensionError("symmetrize needs a square matrix");
  return 0.5 * (S + S.transpose());
}

RankStep rank_adjust(RankControlState& state, const Eigen::VectorXd& eig_ascending) {
  if (state.c < 1 || eig_ascending.size() < state.c + 1) {
    throw ParameterError("rank control needs c+1 = " + std::to_string(state.c + 1) +
                         " eigenvalues, got " + std::to_string(eig_ascending.size()));
  }
  const double head = eig_ascending.head(state.c).sum();
  const double head_plus = head + eig_ascending(state.c);
  state.last_eig_sums = {head, head_plus};
  if (head > state.tol) {
    state.lambda = std::min(2.0 * state.lambda, kLambdaMax);
    return RankStep::Doubled;
  }
  if (head_plus < state.tol) {
    state.lambda = std::max(0.5 * state.lambda, kLambdaMin);
    return RankStep::Halved;
  }
  return RankStep::Converged;
}

int count_zero_eigenvalues(const Eigen::VectorXd& eig_ascending, double rel_tol) {
  if (eig_ascending.size() == 0) return 0;
  const double threshold = rel_tol * std::max(0.0, eig_ascending.maxCoeff());
  int count = 0;
  for (Eigen::Index i = 0; i < eig_ascending.size(); ++i) {
    if (eig_ascending(i) <= threshold) ++count;
  }
  return count;
}

}  // namespace subspace
