#include "subspace/data.hpp"

#include <string>

#include "subspace/errors.hpp"

namespace subspace {

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int c) {
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), c);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= c) {
      throw ValidationError("label " + std::to_string(labels[i]) + " outside [0, " +
                            std::to_string(c) + ")");
    }
    Y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return Y;
}

std::vector<int> labels_from_one_hot(const Eigen::MatrixXd& Y) {
  std::vector<int> labels(static_cast<std::size_t>(Y.rows()));
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    Eigen::Index j = 0;
    Y.row(i).maxCoeff(&j);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(j);
  }
  return labels;
}

void require_one_hot(const Eigen::MatrixXd& Y, Eigen::Index rows) {
  if (Y.rows() != rows) {
    throw DimensionError("label matrix has " + std::to_string(Y.rows()) + " rows, expected " +
                         std::to_string(rows));
  }
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    int ones = 0;
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      const double v = Y(i, j);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw ValidationError("label row " + std::to_string(i) + " is not one-hot");
      }
    }
    if (ones != 1) throw ValidationError("label row " + std::to_string(i) + " is not one-hot");
  }
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    if (Y.col(j).sum() == 0.0) {
      throw ValidationError("class " + std::to_string(j) + " has no samples");
    }
  }
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  return out;
}

std::vector<int> take(const std::vector<int>& v, const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(v[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace subspace
