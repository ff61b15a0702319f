#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace subspace {

/// Samples in rows, with labels both as indices and one-hot rows.
struct Dataset {
  Eigen::MatrixXd X;                    // n x d
  Eigen::MatrixXd Y;                    // n x c one-hot
  std::vector<int> labels;              // n, values in [0, c)
  std::vector<std::string> class_names;  // c
};

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int c);

/// Column index of the 1 in each row.
std::vector<int> labels_from_one_hot(const Eigen::MatrixXd& Y);

/// Throws ValidationError unless Y has `rows` rows, every row is one-hot and
/// every class column is used at least once.
void require_one_hot(const Eigen::MatrixXd& Y, Eigen::Index rows);

/// Row subset of X.
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& idx);

std::vector<int> take(const std::vector<int>& v, const std::vector<int>& idx);

}  // namespace subspace
