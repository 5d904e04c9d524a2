#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace prent {

using sparse_features = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct classifier_config {
  /// inverse L2 strength, as in the usual "C" parameterization
  double c = 1.0;
  int max_iterations = 1000;
  double tolerance = 1e-4;
};

/// Multinomial logistic regression with an unpenalized intercept, fitted by
/// L-BFGS on  C * sum_i log-loss_i + ||W||^2 / 2  (scaled by 1 / (C n)).
class logistic_regression {
public:
  explicit logistic_regression(classifier_config config = {}) : config_(config) {}

  /// labels are class names; throws degenerate_labels with fewer than two classes
  void fit(const sparse_features& x, const std::vector<std::string>& labels);

  Eigen::MatrixXd predict_proba(const sparse_features& x) const;
  std::vector<std::string> predict(const sparse_features& x) const;

  const std::vector<std::string>& classes() const { return classes_; }
  const Eigen::MatrixXd& weights() const { return weights_; } ///< features x classes
  const Eigen::RowVectorXd& intercept() const { return intercept_; }
  int iterations() const { return iterations_; }
  bool converged() const { return converged_; }

private:
  classifier_config config_;
  std::vector<std::string> classes_;
  Eigen::MatrixXd weights_;
  Eigen::RowVectorXd intercept_;
  int iterations_ = 0;
  bool converged_ = false;
};

} // namespace prent
