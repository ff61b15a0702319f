#include "subspace/sdspcaan.hpp"

#include <algorithm>
#include <string>

#include "subspace/data.hpp"
#include "subspace/errors.hpp"
#include "subspace/pca.hpp"
#include "subspace/sdspca.hpp"

namespace subspace {

namespace {

void validate(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const SdspcaanParams& p) {
  require_finite(X, "data matrix");
  require_centered(X);
  require_one_hot(Y, X.rows());
  const Eigen::Index n = X.rows();
  if (p.k < 1 || p.k > std::min(n, X.cols())) {
    throw ParameterError("subspace dimension k=" + std::to_string(p.k) + " outside [1, min(n,d)]");
  }
  if (p.m < 1 || p.m > n - 2) {
    throw ParameterError("neighbor count m=" + std::to_string(p.m) + " outside [1, n-2]");
  }
  if (Y.cols() + 1 > n) throw ValidationError("need more samples than classes");
  if (p.alpha < 0.0 || p.beta < 0.0 || p.delta < 0.0) {
    throw ParameterError("alpha, beta and delta must be nonnegative");
  }
  if (!(p.tol > 0.0) || p.max_iter < 1 || !(p.eps > 0.0)) {
    throw ParameterError("tol and eps must be positive, max_iter at least 1");
  }
}

}  // namespace

Eigen::MatrixXd label_sq_dists(const Eigen::MatrixXd& Y) { return pairwise_sq_dists(Y); }

double graph_terms(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Q,
                   const SimilarityGraph& graph, double lambda) {
  const Eigen::Index n = X.rows();
  if (graph.S.rows() != n || graph.S.cols() != n || Q.rows() != n || Y.rows() != n) {
    throw DimensionError("graph terms: X, Y, Q and S disagree on n");
  }
  const Eigen::MatrixXd L = laplacian(symmetrize(graph.S));
  const Eigen::MatrixXd P = X * (X.transpose() * Q);
  const double smooth = (P.transpose() * L * P).trace();
  const double labels = (Y.transpose() * L * Y).trace();
  const Eigen::MatrixXd D = pairwise_sq_dists(P) + lambda * label_sq_dists(Y);
  const Eigen::VectorXd gamma = optimal_gammas(D, graph.m);
  double spread = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    spread += gamma(i) * (graph.S.row(i).squaredNorm() - graph.S(i, i) * graph.S(i, i));
  }
  return 2.0 * smooth + spread + 2.0 * lambda * labels;
}

double sdspcaan_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const Eigen::MatrixXd& Q, const SimilarityGraph& graph, double alpha,
                          double beta, double delta, double lambda) {
  const double base = sdspca_objective(X, Y, Q, alpha, beta);
  if (delta == 0.0) return base;
  return base + 0.5 * delta * graph_terms(X, Y, Q, graph, lambda);
}

GraphFit fit_sdspcaan(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const SdspcaanParams& p) {
  validate(X, Y, p);
  const Eigen::Index n = X.rows();
  const int c = static_cast<int>(Y.cols());
  const bool spcan = p.variant == GraphVariant::SpcanOnly;
  const bool uses_graph = spcan || p.delta > 0.0;
  const bool adaptive = uses_graph && p.variant != GraphVariant::FixedGraph;
  const double weight = spcan ? 1.0 : p.delta;

  const Eigen::MatrixXd G = X * X.transpose();
  Eigen::MatrixXd Z0 = Eigen::MatrixXd::Zero(n, n);
  if (!spcan) Z0 = -G - p.alpha * (Y * Y.transpose());
  const Eigen::MatrixXd Dy = label_sq_dists(Y);

  const SimilarityGraph initial = update_similarity(pairwise_sq_dists(X), p.m, p.eps);
  Eigen::MatrixXd S_raw = initial.S;  // row-stochastic, as produced by the last S-step
  Eigen::MatrixXd S = initial.S;      // symmetrized copy used for L
  Eigen::MatrixXd smoothing;          // X X^T L X X^T
  if (uses_graph && !adaptive) {
    S = symmetrize(initial.S);
    smoothing = G * laplacian(S) * G;
  }

  RankControlState rank{1.0, p.tol, c, {0.0, 0.0}};
  Eigen::VectorXd D = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd Q_prev = Eigen::MatrixXd::Zero(n, p.k);
  Eigen::MatrixXd Q;

  GraphFit out;
  out.model.k = p.k;
  auto& diag = out.model.diagnostics;
  diag.converged = false;

  for (int t = 1; t <= p.max_iter; ++t) {
    Eigen::MatrixXd L;
    if (adaptive) {
      S = symmetrize(S_raw);
      L = laplacian(S);
      smoothing = G * L * G;
    }
    Eigen::MatrixXd Z = Z0;
    if (!spcan) Z.diagonal() += p.beta * D;
    if (uses_graph) Z += weight * smoothing;
    Q = trailing_eigvecs(Z, p.k);

    const double lambda = rank.lambda;
    const SimilarityGraph current{adaptive ? S_raw : initial.S, p.m};
    const double objective =
        spcan ? 0.5 * graph_terms(X, Y, Q, current, lambda)
              : sdspcaan_objective(X, Y, Q, current, p.alpha, p.beta, uses_graph ? p.delta : 0.0,
                                   lambda);
    diag.trace.push_back({t, objective, lambda});
    diag.iterations = t;

    const bool q_settled = l11_norm(Q - Q_prev) < p.tol;
    if (adaptive) {
      const RankStep step = rank_adjust(rank, sym_eigvals(L));
      if (step == RankStep::Converged && q_settled) {
        diag.converged = true;
      }
    } else if (q_settled) {
      diag.converged = true;
    }

    if (p.observer) {
      IterationProbe probe;
      probe.iter = t;
      probe.lambda = rank.lambda;
      probe.Z = &Z;
      probe.Q_prev = &Q_prev;
      probe.Q = &Q;
      p.observer(probe);
    }
    if (diag.converged) break;

    D = reweight_diag(Q, p.eps);
    if (adaptive) {
      const Eigen::MatrixXd dist = pairwise_sq_dists(G * Q) + rank.lambda * Dy;
      Eigen::MatrixXd S_next = update_similarity(dist, p.m, p.eps).S;
      if (p.observer) {
        IterationProbe probe;
        probe.iter = t;
        probe.lambda = rank.lambda;
        probe.distances = &dist;
        probe.S_prev = &S_raw;
        probe.S = &S_next;
        p.observer(probe);
      }
      S_raw = std::move(S_next);
    }
    Q_prev = Q;
  }

  if (uses_graph) diag.final_lambda = rank.lambda;
  out.model.W = X.transpose() * Q;
  out.model.Q = std::move(Q);
  out.graph = {adaptive ? S_raw : initial.S, p.m};
  return out;
}

GraphFit fit_spcan(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, SdspcaanParams params) {
  params.variant = GraphVariant::SpcanOnly;
  return fit_sdspcaan(X, Y, params);
}

}  // namespace subspace
