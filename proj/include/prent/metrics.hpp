#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace prent {

struct class_metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

/// Multiclass report. Labels are the sorted union of true and predicted
/// labels; confusion(i, j) counts true labels[i] predicted as labels[j].
/// precision/recall/f1 are support-weighted means; undefined ratios are 0.
struct metrics_report {
  std::vector<std::string> labels;
  Eigen::MatrixXi confusion;
  std::map<std::string, class_metrics> per_class;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double macro_f1 = 0.0;

  nlohmann::json to_json() const;
};

metrics_report classification_report(const std::vector<std::string>& truth,
                                      const std::vector<std::string>& predicted);

/// Metrics of the positive class of a binary decision.
struct binary_metrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;

  nlohmann::json to_json() const;
};

binary_metrics binary_report(const std::vector<bool>& truth, const std::vector<bool>& predicted);

} // namespace prent
