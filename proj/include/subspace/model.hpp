#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace subspace {

/// Per-iteration record of an alternating fit.
struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double lambda = 0.0;  // NaN for fits without a graph
};

struct FitDiagnostics {
  std::vector<IterationRecord> trace;
  int iterations = 0;
  bool converged = true;
  std::optional<double> final_lambda;
};

/// A learned linear projection. Scores are X_centered * W.
struct ReductionModel {
  Eigen::MatrixXd W;                // d x k
  std::optional<Eigen::MatrixXd> Q;  // n x k auxiliary factor, when the method has one
  Eigen::Index k = 0;
  FitDiagnostics diagnostics;
};

/// X_new * W. X_new must already be centered with the training mean.
Eigen::MatrixXd transform(const ReductionModel& model, const Eigen::MatrixXd& X_new);

}  // namespace subspace
