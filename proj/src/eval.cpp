#include "subspace/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "subspace/errors.hpp"
#include "subspace/pca.hpp"
#include "subspace/pcan.hpp"
#include "subspace/sdspca.hpp"
#include "subspace/sdspcaan.hpp"

namespace subspace {

// ---------------------------------------------------------------------------
// Splits

std::array<int, 3> split_sizes(int n, const SplitSpec& spec) {
  const double total = spec.train_fraction + spec.val_fraction + spec.test_fraction;
  if (std::abs(total - 1.0) > 1e-9 || spec.train_fraction < 0 || spec.val_fraction < 0 ||
      spec.test_fraction < 0) {
    throw ParameterError("split fractions must be nonnegative and sum to 1");
  }
  // The small offset keeps products such as 0.4 * 10 from rounding below 4.
  const int val = static_cast<int>(std::floor(spec.val_fraction * n + 1e-9));
  const int test = static_cast<int>(std::floor(spec.test_fraction * n + 1e-9));
  return {n - val - test, val, test};
}

Splits split(int n, const std::vector<int>& labels, const SplitSpec& spec) {
  if (static_cast<int>(labels.size()) != n) {
    throw DimensionError("split: label count does not match n");
  }
  const auto [n_train, n_val, n_test] = split_sizes(n, spec);
  if (n_train < 1 || n_val < 1 || n_test < 1) {
    throw ValidationError("split of n=" + std::to_string(n) + " leaves an empty fold");
  }
  const int c = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<bool> present(static_cast<std::size_t>(c), false);
  for (int l : labels) present[static_cast<std::size_t>(l)] = true;
  const auto classes = static_cast<int>(std::count(present.begin(), present.end(), true));
  if (classes > n_train) {
    throw ValidationError("training fold of " + std::to_string(n_train) +
                          " samples cannot hold all " + std::to_string(classes) + " classes");
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(spec.repetition_index),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<bool> seen(static_cast<std::size_t>(c), false);
    for (int i = 0; i < n_train; ++i) seen[static_cast<std::size_t>(labels[perm[i]])] = true;
    if (std::count(seen.begin(), seen.end(), true) != classes) continue;

    Splits out;
    out.train.assign(perm.begin(), perm.begin() + n_train);
    out.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
    out.test.assign(perm.begin() + n_train + n_val, perm.end());
    return out;
  }
  throw ValidationError("could not draw a training fold containing every class in 100 attempts");
}

// ---------------------------------------------------------------------------
// Classification

std::vector<int> knn1_predict(const Eigen::MatrixXd& train_Z, const std::vector<int>& train_labels,
                              const Eigen::MatrixXd& query_Z) {
  const Eigen::Index p = train_Z.rows();
  if (p == 0) throw ValidationError("1-NN needs at least one training sample");
  if (static_cast<Eigen::Index>(train_labels.size()) != p) {
    throw DimensionError("1-NN: label count does not match training rows");
  }
  if (query_Z.cols() != train_Z.cols()) throw DimensionError("1-NN: column counts differ");

  Eigen::RowVectorXd sigma = Eigen::RowVectorXd::Ones(train_Z.cols());
  if (p > 1) {
    const Eigen::MatrixXd centered = train_Z.rowwise() - train_Z.colwise().mean();
    sigma = (centered.colwise().squaredNorm() / static_cast<double>(p - 1)).cwiseSqrt();
    const double top = sigma.size() ? sigma.maxCoeff() : 0.0;
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
      if (!(sigma(j) > 1e-12 * top) || sigma(j) == 0.0) sigma(j) = 1.0;
    }
  }
  const Eigen::RowVectorXd inv = sigma.cwiseInverse();
  const Eigen::MatrixXd T = train_Z.array().rowwise() * inv.array();

  std::vector<int> out(static_cast<std::size_t>(query_Z.rows()));
  for (Eigen::Index q = 0; q < query_Z.rows(); ++q) {
    const Eigen::RowVectorXd z = query_Z.row(q).cwiseProduct(inv);
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p; ++i) {
      const double d = (T.row(i) - z).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    out[static_cast<std::size_t>(q)] = train_labels[static_cast<std::size_t>(best)];
  }
  return out;
}

double bca(const std::vector<int>& predicted, const std::vector<int>& actual, int c) {
  if (predicted.size() != actual.size()) throw DimensionError("bca: length mismatch");
  if (actual.empty()) throw ValidationError("bca: empty input");
  std::vector<int> total(static_cast<std::size_t>(c), 0), hit(static_cast<std::size_t>(c), 0);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] < 0 || actual[i] >= c) throw ValidationError("bca: label outside [0, c)");
    ++total[static_cast<std::size_t>(actual[i])];
    if (predicted[i] == actual[i]) ++hit[static_cast<std::size_t>(actual[i])];
  }
  double sum = 0.0;
  int classes = 0;
  for (int j = 0; j < c; ++j) {
    if (total[static_cast<std::size_t>(j)] == 0) continue;
    sum += static_cast<double>(hit[static_cast<std::size_t>(j)]) / total[static_cast<std::size_t>(j)];
    ++classes;
  }
  return sum / classes;
}

// ---------------------------------------------------------------------------
// Methods

std::string method_name(Method m) {
  switch (m) {
    case Method::Baseline: return "baseline";
    case Method::Pca: return "pca";
    case Method::Sdspca: return "sdspca";
    case Method::Pcan: return "pcan";
    case Method::Spcan: return "spcan";
    case Method::SdspcaLpp: return "sdspca_lpp";
    case Method::Sdspcaan: return "sdspcaan";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::Baseline, Method::Pca,       Method::Sdspca,
                                           Method::Pcan,     Method::Spcan,     Method::SdspcaLpp,
                                           Method::Sdspcaan};
  return methods;
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  throw ValidationError("unknown method '" + name + "'");
}

MethodAxes method_axes(Method m) {
  switch (m) {
    case Method::Sdspca: return {true, true, false};
    case Method::SdspcaLpp:
    case Method::Sdspcaan: return {true, true, true};
    default: return {};
  }
}

TraceScales trace_scales(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int m, double eps) {
  const double tr_x = X.squaredNorm();  // Tr(X X^T)
  TraceScales s;
  s.alpha = tr_x / Y.squaredNorm();
  s.beta = tr_x / static_cast<double>(X.rows());
  const Eigen::MatrixXd S0 = update_similarity(pairwise_sq_dists(X), m, eps).S;
  const Eigen::MatrixXd G = X * X.transpose();
  const double tr_smooth = (G * laplacian(symmetrize(S0)) * G).trace();
  s.delta = tr_smooth > 0.0 ? tr_x / tr_smooth : 1.0;
  return s;
}

std::vector<Eigen::Index> filter_k_grid(const std::vector<Eigen::Index>& k, Eigen::Index n,
                                        Eigen::Index d, Eigen::Index c) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index v : k) {
    if (v >= c && v <= n && v <= d && v >= 1) out.push_back(v);
  }
  return out;
}

ReductionModel fit_method(Method method, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const HyperParams& hp, const TraceScales& scales,
                          const FitOptions& options) {
  switch (method) {
    case Method::Baseline: return fit_baseline(X.cols(), hp.k);
    case Method::Pca: return fit_pca(X, hp.k);
    case Method::Sdspca: {
      SdspcaParams p;
      p.k = hp.k;
      p.alpha = hp.alpha * scales.alpha;
      p.beta = hp.beta * scales.beta;
      p.eps = options.eps;
      p.tol = options.tol;
      p.max_iter = options.max_iter;
      return fit_sdspca(X, Y, p);
    }
    case Method::Pcan: {
      PcanParams p;
      p.k = hp.k;
      p.c = static_cast<int>(Y.cols());
      p.m = options.m;
      p.eps = options.eps;
      p.tol = options.tol;
      p.max_iter = options.max_iter;
      return fit_pcan(X, p).model;
    }
    case Method::Spcan:
    case Method::SdspcaLpp:
    case Method::Sdspcaan: {
      SdspcaanParams p;
      p.k = hp.k;
      p.m = options.m;
      p.alpha = hp.alpha * scales.alpha;
      p.beta = hp.beta * scales.beta;
      p.delta = hp.delta * scales.delta;
      p.eps = options.eps;
      p.tol = options.tol;
      p.max_iter = options.max_iter;
      p.variant = method == Method::Spcan       ? GraphVariant::SpcanOnly
                  : method == Method::SdspcaLpp ? GraphVariant::FixedGraph
                                                : GraphVariant::Full;
      return fit_sdspcaan(X, Y, p).model;
    }
  }
  throw ValidationError("unhandled method");
}

// ---------------------------------------------------------------------------
// Protocol

PreparedSplit prepare_split(const Dataset& data, const Splits& splits) {
  PreparedSplit out;
  out.c = static_cast<int>(data.Y.cols());
  auto fold = [&](const std::vector<int>& idx) {
    return Fold{take_rows(data.X, idx), take_rows(data.Y, idx), take(data.labels, idx)};
  };
  out.train = fold(splits.train);
  out.val = fold(splits.val);
  out.test = fold(splits.test);
  const Eigen::RowVectorXd mean = center_columns(out.train.X);
  out.val.X.rowwise() -= mean;
  out.test.X.rowwise() -= mean;
  return out;
}

double score_model(const ReductionModel& model, const Fold& train, const Fold& query, int c) {
  const Eigen::MatrixXd train_Z = transform(model, train.X);
  const Eigen::MatrixXd query_Z = transform(model, query.X);
  return bca(knn1_predict(train_Z, train.labels, query_Z), query.labels, c);
}

namespace {

std::string describe(Method method, const HyperParams& hp) {
  std::ostringstream os;
  os << method_name(method) << " k=" << hp.k;
  const MethodAxes axes = method_axes(method);
  if (axes.alpha) os << " alpha=" << hp.alpha;
  if (axes.beta) os << " beta=" << hp.beta;
  if (axes.delta) os << " delta=" << hp.delta;
  return os.str();
}

std::vector<HyperParams> enumerate(Method method, const Grids& grids,
                                   const std::vector<Eigen::Index>& ks) {
  const MethodAxes axes = method_axes(method);
  const std::vector<double> one{1.0};
  const auto& as = axes.alpha ? grids.alpha : one;
  const auto& bs = axes.beta ? grids.beta : one;
  const auto& ds = axes.delta ? grids.delta : one;
  std::vector<HyperParams> out;
  for (Eigen::Index k : ks)
    for (double a : as)
      for (double b : bs)
        for (double d : ds) out.push_back({k, a, b, d});
  return out;
}

}  // namespace

Selection select_hyperparameters(const Fold& train, const Fold& val, int c, Method method,
                                 const Grids& grids, const FitOptions& options) {
  const std::vector<Eigen::Index> ks =
      filter_k_grid(grids.k, train.X.rows(), train.X.cols(), static_cast<Eigen::Index>(c));
  const std::vector<HyperParams> points = enumerate(method, grids, ks);
  if (points.empty()) {
    throw ValidationError("hyperparameter grid is empty after applying c <= k <= min(n, d)");
  }

  Selection best;
  const MethodAxes axes = method_axes(method);
  const bool needs_scales = axes.alpha || axes.beta || axes.delta;
  if (needs_scales) best.scales = trace_scales(train.X, train.Y, options.m, options.eps);

  bool found = false;
  for (const HyperParams& hp : points) {
    try {
      ReductionModel model = fit_method(method, train.X, train.Y, hp, best.scales, options);
      const double score = score_model(model, train, val, c);
      if (!found || score > best.val_bca || (score == best.val_bca && hp.k < best.params.k)) {
        best.params = hp;
        best.model = std::move(model);
        best.val_bca = score;
        found = true;
      }
    } catch (const std::exception& e) {
      best.failures.push_back(describe(method, hp) + ": " + e.what());
    }
  }
  if (!found) {
    std::string msg = "every grid point failed for " + method_name(method) + ":";
    for (const auto& f : best.failures) msg += "\n  " + f;
    throw Error(msg);
  }
  return best;
}

GridResult grid_search(const PreparedSplit& split, Method method, const Grids& grids,
                       const FitOptions& options) {
  GridResult out;
  out.selection = select_hyperparameters(split.train, split.val, split.c, method, grids, options);
  out.test_bca = score_model(out.selection.model, split.train, split.test, split.c);
  return out;
}

}  // namespace subspace
