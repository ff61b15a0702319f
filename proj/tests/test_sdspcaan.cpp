#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "subspace/data.hpp"
#include "subspace/errors.hpp"
#include "subspace/eval.hpp"
#include "subspace/graph.hpp"
#include "subspace/linalg.hpp"
#include "subspace/pca.hpp"
#include "subspace/sdspca.hpp"
#include "subspace/sdspcaan.hpp"
#include "subspace/synth.hpp"
#include "support.hpp"

using namespace subspace;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Instance {
  MatrixXd X, Y;
  std::vector<int> labels;
};

Instance random_instance(std::mt19937_64& rng, int n, int d, int c, double shift = 2.0) {
  Instance in;
  in.labels = testing::random_labels(rng, n, c);
  in.Y = one_hot(in.labels, c);
  MatrixXd X = testing::gaussian(rng, n, d);
  for (int i = 0; i < n; ++i) X(i, in.labels[static_cast<std::size_t>(i)] % d) += shift;
  in.X = testing::centered(X);
  return in;
}

SdspcaanParams scaled_params(const Instance& in, Eigen::Index k, int m) {
  const TraceScales s = trace_scales(in.X, in.Y, m);
  SdspcaanParams p;
  p.k = k;
  p.m = m;
  p.alpha = s.alpha;
  p.beta = s.beta;
  p.delta = s.delta;
  return p;
}

}  // namespace

TEST_CASE("delta = 0 reproduces SDSPCA") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto in = random_instance(rng, 30, 12, 3);
    SdspcaanParams p = scaled_params(in, 4, 5);
    p.delta = 0.0;
    const auto full = fit_sdspcaan(in.X, in.Y, p);
    SdspcaParams q;
    q.k = 4;
    q.alpha = p.alpha;
    q.beta = p.beta;
    const auto ref = fit_sdspca(in.X, in.Y, q);
    CHECK(max_principal_angle(*full.model.Q, *ref.Q) <= 1e-6);
    CHECK_FALSE(full.model.diagnostics.final_lambda.has_value());
  }
}

TEST_CASE("FixedGraph keeps the initial graph") {
  std::mt19937_64 rng(2);
  const auto in = random_instance(rng, 25, 10, 2);
  SdspcaanParams p = scaled_params(in, 3, 4);
  p.variant = GraphVariant::FixedGraph;
  const auto fit = fit_sdspcaan(in.X, in.Y, p);
  const MatrixXd initial = update_similarity(pairwise_sq_dists(in.X), 4).S;
  CHECK(fit.graph.S == initial);
}

TEST_CASE("separated blobs classify well after SDSPCAAN") {
  BlobSpec spec;
  spec.n_per_class = 40;
  spec.c = 3;
  spec.d_informative = 3;
  spec.d_noise = 47;
  spec.separation = 6.0;
  spec.seed = 11;
  const Dataset data = make_blobs(spec);
  SplitSpec ss;
  ss.seed = 4;
  const PreparedSplit ps = prepare_split(data, split(120, data.labels, ss));
  const TraceScales scales = trace_scales(ps.train.X, ps.train.Y, 5);
  HyperParams hp;
  hp.k = 10;
  const auto model = fit_method(Method::Sdspcaan, ps.train.X, ps.train.Y, hp, scales, FitOptions{});
  CHECK(score_model(model, ps.train, ps.test, 3) >= 0.95);
}

TEST_CASE("per-step monotonicity, orthonormality and simplex rows") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const auto in = random_instance(rng, 30, 12, 3);
    SdspcaanParams p = scaled_params(in, 4, 5);
    int q_steps = 0, s_steps = 0;
    p.observer = [&](const IterationProbe& probe) {
      if (probe.Q) {
        const MatrixXd& Q = *probe.Q;
        CHECK((Q.transpose() * Q - MatrixXd::Identity(Q.cols(), Q.cols())).norm() < 1e-10);
        if (probe.iter > 1) {
          const double now = (Q.transpose() * *probe.Z * Q).trace();
          const double before = (probe.Q_prev->transpose() * *probe.Z * *probe.Q_prev).trace();
          CHECK(now <= before + 1e-9 * std::max(1.0, std::abs(before)));
        }
        ++q_steps;
      }
      if (probe.S) {
        const MatrixXd& S = *probe.S;
        CHECK(S.minCoeff() >= 0.0);
        CHECK((S.rowwise().sum() - VectorXd::Ones(S.rows())).cwiseAbs().maxCoeff() <= 1e-8);
        const VectorXd gamma = optimal_gammas(*probe.distances, p.m);
        const double now = similarity_objective(*probe.distances, S, gamma);
        const double before = similarity_objective(*probe.distances, *probe.S_prev, gamma);
        CHECK(now <= before + 1e-9 * std::max(1.0, std::abs(before)));
        ++s_steps;
      }
    };
    const auto fit = fit_sdspcaan(in.X, in.Y, p);
    CHECK(q_steps == fit.model.diagnostics.iterations);
    CHECK(s_steps >= q_steps - 1);
    REQUIRE(fit.model.diagnostics.final_lambda.has_value());
    CHECK(*fit.model.diagnostics.final_lambda >= kLambdaMin);
    CHECK(*fit.model.diagnostics.final_lambda <= kLambdaMax);
  }
}

TEST_CASE("SPCAN separates label-aligned clusters") {
  BlobSpec spec;
  spec.n_per_class = 8;
  spec.c = 3;
  spec.d_informative = 3;
  spec.d_noise = 30;
  spec.separation = 10.0;
  Dataset data = make_blobs(spec);
  center_columns(data.X);
  SdspcaanParams p;
  p.k = 5;
  p.m = 4;
  const auto fit = fit_spcan(data.X, data.Y, p);
  CHECK(count_components(fit.graph.S) == 3);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j)
      if (fit.graph.S(i, j) > 0.0) CHECK(data.labels[static_cast<std::size_t>(i)] == data.labels[static_cast<std::size_t>(j)]);
  CHECK((fit.model.Q->transpose() * *fit.model.Q - MatrixXd::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("SPCAN is the large-delta limit of the full model") {
  // One step from the same graph agrees on random instances.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto in = random_instance(rng, 20, 30, 2, 3.0);
    SdspcaanParams p = scaled_params(in, 3, 4);
    p.delta *= 1e9;
    p.max_iter = 1;
    const auto full = fit_sdspcaan(in.X, in.Y, p);
    const auto spcan = fit_spcan(in.X, in.Y, p);
    CHECK(max_principal_angle(*full.model.Q, *spcan.model.Q) <= 1e-6);
  }

  // Whole runs agree on a small instance where the projection keeps more
  // directions than the graph has components.
  BlobSpec spec;
  spec.n_per_class = 8;
  spec.c = 2;
  spec.d_informative = 2;
  spec.d_noise = 30;
  spec.separation = 10.0;
  spec.seed = 5;
  Instance in;
  const Dataset data = make_blobs(spec);
  in.X = testing::centered(data.X);
  in.Y = data.Y;
  SdspcaanParams p = scaled_params(in, 4, 4);
  p.delta *= 1e9;
  const auto full = fit_sdspcaan(in.X, in.Y, p);
  const auto spcan = fit_spcan(in.X, in.Y, p);
  CHECK(max_principal_angle(*full.model.Q, *spcan.model.Q) <= 1e-3);
}

TEST_CASE("fit_sdspcaan validation") {
  std::mt19937_64 rng(6);
  const auto in = random_instance(rng, 12, 5, 2);
  SdspcaanParams p;
  p.k = 3;
  p.m = 11;
  CHECK_THROWS_AS(fit_sdspcaan(in.X, in.Y, p), ParameterError);
  p.m = 3;
  p.delta = -1.0;
  CHECK_THROWS_AS(fit_sdspcaan(in.X, in.Y, p), ParameterError);
  p.delta = 1.0;
  p.k = 6;
  CHECK_THROWS_AS(fit_sdspcaan(in.X, in.Y, p), ParameterError);
}

TEST_CASE("sdspcaan_objective with delta = 0 equals the SDSPCA objective") {
  std::mt19937_64 rng(7);
  const auto in = random_instance(rng, 15, 6, 3);
  const MatrixXd Q = testing::random_orthonormal(rng, 15, 3);
  const SimilarityGraph g = update_similarity(pairwise_sq_dists(in.X), 3);
  CHECK(sdspcaan_objective(in.X, in.Y, Q, g, 0.4, 0.9, 0.0, 1.0) ==
        sdspca_objective(in.X, in.Y, Q, 0.4, 0.9));
}

TEST_CASE("label smoothness vanishes on label-aligned blocks") {
  std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const MatrixXd Y = one_hot(labels, 2);
  MatrixXd S = MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j && labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) S(i, j) = 0.5;
  const MatrixXd L = laplacian(symmetrize(S));
  CHECK(std::abs((Y.transpose() * L * Y).trace()) < 1e-15);
}

TEST_CASE("sdspcaan_objective matches a term-by-term evaluation") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto in = random_instance(rng, 14, 7, 2);
    const int n = 14, m = 3;
    const MatrixXd Q = testing::random_orthonormal(rng, n, 3);
    SimilarityGraph g = update_similarity(pairwise_sq_dists(testing::gaussian(rng, n, 2)), m);
    const double alpha = 0.7, beta = 1.3, delta = 0.05, lambda = 2.0;

    // Independent pieces.
    const MatrixXd W = in.X.transpose() * Q;
    const MatrixXd Gm = in.Y.transpose() * Q;
    double l21 = 0.0;
    for (int i = 0; i < n; ++i) l21 += std::sqrt(Q.row(i).squaredNorm());
    const double base = (in.X - Q * W.transpose()).squaredNorm() +
                        alpha * (in.Y - Q * Gm.transpose()).squaredNorm() + beta * l21;
    const MatrixXd Ssym = 0.5 * (g.S + g.S.transpose());
    const MatrixXd P = in.X * W;
    double smooth = 0.0, label = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        smooth += 0.5 * Ssym(i, j) * (P.row(i) - P.row(j)).squaredNorm();
        label += 0.5 * Ssym(i, j) * (in.Y.row(i) - in.Y.row(j)).squaredNorm();
      }
    double spread = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<double> d;
      for (int j = 0; j < n; ++j)
        if (j != i)
          d.push_back((P.row(i) - P.row(j)).squaredNorm() +
                      lambda * (in.Y.row(i) - in.Y.row(j)).squaredNorm());
      std::sort(d.begin(), d.end());
      double prefix = 0.0;
      for (int j = 0; j < m; ++j) prefix += d[static_cast<std::size_t>(j)];
      const double gamma = 0.5 * m * d[static_cast<std::size_t>(m)] - 0.5 * prefix;
      spread += gamma * g.S.row(i).squaredNorm();
    }
    const double expected = base + 0.5 * delta * (2.0 * smooth + spread + 2.0 * lambda * label);
    CHECK(sdspcaan_objective(in.X, in.Y, Q, g, alpha, beta, delta, lambda) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("label_sq_dists of one-hot rows") {
  const MatrixXd Y = one_hot({0, 1, 0}, 2);
  const MatrixXd D = label_sq_dists(Y);
  CHECK(D(0, 2) == 0.0);
  CHECK(D(0, 1) == 2.0);
  CHECK(D(1, 1) == 0.0);
}
