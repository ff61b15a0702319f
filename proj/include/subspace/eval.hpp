#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subspace/data.hpp"
#include "subspace/graph.hpp"
#include "subspace/model.hpp"

namespace subspace {

// ---------------------------------------------------------------------------
// Splits

struct SplitSpec {
  double train_fraction = 0.2;
  double val_fraction = 0.4;
  double test_fraction = 0.4;
  std::uint64_t seed = 0;
  int repetition_index = 0;
};

struct Splits {
  std::vector<int> train, val, test;
};

/// Validation and test each get floor(fraction * n) samples, training gets
/// the remainder. The permutation is seeded from (seed, repetition_index) and
/// redrawn (up to 100 times) until training contains every class.
Splits split(int n, const std::vector<int>& labels, const SplitSpec& spec);

/// Sizes (train, val, test) the split rule produces for n samples.
std::array<int, 3> split_sizes(int n, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Classification

/// 1-nearest-neighbor under standardized Euclidean distance. Each column is
/// scaled by the sample standard deviation of the training scores (1 for a
/// constant column). Ties go to the lowest training index.
std::vector<int> knn1_predict(const Eigen::MatrixXd& train_Z, const std::vector<int>& train_labels,
                              const Eigen::MatrixXd& query_Z);

/// Balanced classification accuracy: mean per-class recall over the classes
/// present in `actual`.
double bca(const std::vector<int>& predicted, const std::vector<int>& actual, int c);

// ---------------------------------------------------------------------------
// Methods and hyperparameters

enum class Method { Baseline, Pca, Sdspca, Pcan, Spcan, SdspcaLpp, Sdspcaan };

std::string method_name(Method m);
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();

/// Which grid axes a method consumes.
struct MethodAxes {
  bool alpha = false;
  bool beta = false;
  bool delta = false;
};
MethodAxes method_axes(Method m);

/// Grid multipliers; alpha/beta/delta values are factors of TraceScales.
struct Grids {
  std::vector<Eigen::Index> k{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<double> alpha{0.01, 0.1, 1, 10, 100};
  std::vector<double> beta{0.01, 0.1, 1, 10, 100};
  std::vector<double> delta{0.01, 0.1, 1, 10, 100};
};

/// alpha: Tr(XX^T)/Tr(YY^T), beta: Tr(XX^T)/Tr(D) with D = I_n,
/// delta: Tr(XX^T)/Tr(XX^T L XX^T) with L from the initial adaptive graph.
struct TraceScales {
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 1.0;
};

TraceScales trace_scales(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int m,
                         double eps = kDefaultEps);

/// One grid point; alpha/beta/delta are multipliers.
struct HyperParams {
  Eigen::Index k = 10;
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 1.0;
};

struct FitOptions {
  int m = kDefaultNeighbors;
  double eps = kDefaultEps;
  double tol = 1e-3;
  int max_iter = 500;
};

/// Keeps k values with c <= k <= min(n, d), preserving order.
std::vector<Eigen::Index> filter_k_grid(const std::vector<Eigen::Index>& k, Eigen::Index n,
                                        Eigen::Index d, Eigen::Index c);

/// Fits `method` on centered training data at one grid point.
ReductionModel fit_method(Method method, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                          const HyperParams& hp, const TraceScales& scales,
                          const FitOptions& options);

// ---------------------------------------------------------------------------
// Protocol

/// A labeled block of samples, already centered with the training mean.
struct Fold {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  std::vector<int> labels;
};

struct PreparedSplit {
  Fold train, val, test;
  int c = 0;
};

/// Slices a dataset and subtracts the training mean from every fold.
PreparedSplit prepare_split(const Dataset& data, const Splits& splits);

struct Selection {
  HyperParams params;
  ReductionModel model;
  double val_bca = 0.0;
  TraceScales scales;
  std::vector<std::string> failures;  // "k=.. alpha=..: reason" per failed point
};

/// Picks the grid point with the best validation BCA (ties: smaller k, then
/// earlier grid order). Only sees the training and validation folds.
Selection select_hyperparameters(const Fold& train, const Fold& val, int c, Method method,
                                 const Grids& grids, const FitOptions& options);

struct GridResult {
  Selection selection;
  double test_bca = 0.0;
};

/// select_hyperparameters followed by scoring the chosen model on the test fold.
GridResult grid_search(const PreparedSplit& split, Method method, const Grids& grids,
                       const FitOptions& options);

/// BCA of a model on `query` with 1-NN trained on `train` scores.
double score_model(const ReductionModel& model, const Fold& train, const Fold& query, int c);

}  // namespace subspace
