#include "prent/classifier.hpp"

#include "prent/error.hpp"
#include "prent/optim.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace prent {

namespace {

/// row-wise softmax of scores, returning the summed log-partition
double log_softmax_rows(const Eigen::MatrixXd& scores, Eigen::MatrixXd& probs,
                        Eigen::VectorXd& log_z) {
  probs.resize(scores.rows(), scores.cols());
  log_z.resize(scores.rows());
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    const double m = scores.row(r).maxCoeff();
    probs.row(r) = (scores.row(r).array() - m).exp();
    const double z = probs.row(r).sum();
    probs.row(r) /= z;
    log_z[r] = m + std::log(z);
  }
  return log_z.sum();
}

} // namespace

void logistic_regression::fit(const sparse_features& x, const std::vector<std::string>& labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw std::invalid_argument("feature rows and labels differ in length");
  std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw degenerate_labels("training labels contain fewer than two classes");
  classes_.assign(distinct.begin(), distinct.end());
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < classes_.size(); ++i) index[classes_[i]] = static_cast<Eigen::Index>(i);

  const Eigen::Index n = x.rows(), d = x.cols(), k = static_cast<Eigen::Index>(classes_.size());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) y(i, index[labels[static_cast<std::size_t>(i)]]) = 1.0;
  const double c = config_.c;
  // the objective is divided by C*n so the gradient tolerance does not depend on n
  const double scale = 1.0 / (c * static_cast<double>(n));

  // parameters: d*k weights (column-major) followed by k intercepts
  auto objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    const Eigen::Map<const Eigen::MatrixXd> w(theta.data(), d, k);
    const Eigen::Map<const Eigen::RowVectorXd> b(theta.data() + d * k, k);
    Eigen::MatrixXd scores = x * w;
    scores.rowwise() += b;
    Eigen::MatrixXd probs;
    Eigen::VectorXd log_z;
    const double sum_log_z = log_softmax_rows(scores, probs, log_z);
    const double loss =
        scale * (c * (sum_log_z - (scores.array() * y.array()).sum()) + 0.5 * w.squaredNorm());
    const Eigen::MatrixXd residual = probs - y;
    grad.resize(theta.size());
    Eigen::Map<Eigen::MatrixXd> gw(grad.data(), d, k);
    gw = scale * (c * (x.transpose() * residual) + w);
    Eigen::Map<Eigen::RowVectorXd>(grad.data() + d * k, k) = scale * c * residual.colwise().sum();
    return loss;
  };

  optim::lbfgs_options opts;
  opts.max_iterations = config_.max_iterations;
  opts.gradient_tolerance = config_.tolerance;
  const auto res = optim::minimize<double>(objective, Eigen::VectorXd::Zero(d * k + k), opts);
  weights_ = Eigen::Map<const Eigen::MatrixXd>(res.x.data(), d, k);
  intercept_ = Eigen::Map<const Eigen::RowVectorXd>(res.x.data() + d * k, k);
  iterations_ = res.iterations;
  converged_ = res.converged;
}

Eigen::MatrixXd logistic_regression::predict_proba(const sparse_features& x) const {
  if (classes_.empty()) throw std::logic_error("classifier is not fitted");
  if (x.cols() != weights_.rows()) throw std::invalid_argument("feature width differs from the fitted model");
  Eigen::MatrixXd scores = x * weights_;
  scores.rowwise() += intercept_;
  Eigen::MatrixXd probs;
  Eigen::VectorXd log_z;
  log_softmax_rows(scores, probs, log_z);
  return probs;
}

std::vector<std::string> logistic_regression::predict(const sparse_features& x) const {
  const auto probs = predict_proba(x);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    Eigen::Index best = 0;
    probs.row(r).maxCoeff(&best); // first maximum, like argmax
    out.push_back(classes_[static_cast<std::size_t>(best)]);
  }
  return out;
}

} // namespace prent
