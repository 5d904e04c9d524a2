#include "prent/metrics.hpp"

#include <set>
#include <stdexcept>

namespace prent {

namespace {

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

} // namespace

metrics_report classification_report(const std::vector<std::string>& truth,
                                      const std::vector<std::string>& predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("label vectors differ in length");
  metrics_report r;
  std::set<std::string> labels(truth.begin(), truth.end());
  labels.insert(predicted.begin(), predicted.end());
  r.labels.assign(labels.begin(), labels.end());
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < r.labels.size(); ++i) index[r.labels[i]] = static_cast<Eigen::Index>(i);
  const auto k = static_cast<Eigen::Index>(r.labels.size());
  r.confusion = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < truth.size(); ++i) ++r.confusion(index[truth[i]], index[predicted[i]]);
  if (truth.empty()) return r;

  const double n = static_cast<double>(truth.size());
  r.accuracy = r.confusion.trace() / n;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double tp = r.confusion(c, c);
    const double support = r.confusion.row(c).sum();
    const double predicted_c = r.confusion.col(c).sum();
    class_metrics m;
    m.precision = ratio(tp, predicted_c);
    m.recall = ratio(tp, support);
    m.f1 = harmonic(m.precision, m.recall);
    m.support = static_cast<std::size_t>(support);
    r.per_class[r.labels[static_cast<std::size_t>(c)]] = m;
    r.precision += m.precision * support / n;
    r.recall += m.recall * support / n;
    r.f1 += m.f1 * support / n;
    r.macro_f1 += m.f1 / static_cast<double>(k);
  }
  return r;
}

nlohmann::json metrics_report::to_json() const {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [label, m] : per_class)
    per[label] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  nlohmann::json cm = nlohmann::json::array();
  for (Eigen::Index i = 0; i < confusion.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < confusion.cols(); ++j) row.push_back(confusion(i, j));
    cm.push_back(row);
  }
  return {{"accuracy", accuracy}, {"precision", precision}, {"recall", recall}, {"f1", f1},
          {"macro_f1", macro_f1}, {"labels", labels}, {"confusion", cm}, {"per_class", per}};
}

binary_metrics binary_report(const std::vector<bool>& truth, const std::vector<bool>& predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("label vectors differ in length");
  binary_metrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] && predicted[i]) ++m.tp;
    else if (!truth[i] && predicted[i]) ++m.fp;
    else if (truth[i] && !predicted[i]) ++m.fn;
    else ++m.tn;
  }
  m.precision = ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fp));
  m.recall = ratio(static_cast<double>(m.tp), static_cast<double>(m.tp + m.fn));
  m.f1 = harmonic(m.precision, m.recall);
  m.accuracy = ratio(static_cast<double>(m.tp + m.tn), static_cast<double>(truth.size()));
  return m;
}

nlohmann::json binary_metrics::to_json() const {
  return {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}, {"precision", precision},
          {"recall", recall}, {"f1", f1}, {"accuracy", accuracy}};
}

} // namespace prent
