#include <cmath>
#include <numbers>

#include "epiwave/classifiers.hpp"
#include "epiwave/errors.hpp"

namespace epiwave {

GnbModel gnb_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels) {
  const Eigen::Index n = train.rows();
  const Eigen::Index f = train.cols();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw DimensionMismatch("gnb_fit: row/label count mismatch");
  }

  Eigen::Index counts[2] = {0, 0};
  for (const int label : labels) {
    if (label != 0 && label != 1) throw LabelError("gnb labels must be 0 or 1");
    ++counts[label];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw SingleClassError("gnb_fit needs both classes in the training data");
  }

  GnbModel model;
  model.means = Eigen::MatrixXd::Zero(2, f);
  model.variances = Eigen::MatrixXd::Zero(2, f);
  model.priors << static_cast<double>(counts[0]) / static_cast<double>(n),
      static_cast<double>(counts[1]) / static_cast<double>(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    model.means.row(labels[static_cast<std::size_t>(i)]) += train.row(i);
  }
  model.means.row(0) /= static_cast<double>(counts[0]);
  model.means.row(1) /= static_cast<double>(counts[1]);

  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    model.variances.row(c) += (train.row(i) - model.means.row(c)).array().square().matrix();
  }
  model.variances.row(0) /= static_cast<double>(counts[0]);
  model.variances.row(1) /= static_cast<double>(counts[1]);

  // Floor relative to the largest per-feature variance so constant features
  // stay harmless.
  const double max_variance = model.variances.maxCoeff();
  model.var_floor = max_variance > 0.0 ? 1e-9 * max_variance : 1e-12;
  model.variances = model.variances.cwiseMax(model.var_floor);
  return model;
}

GnbPrediction gnb_predict(const GnbModel& model, const Eigen::VectorXd& query) {
  if (query.size() != model.means.cols()) {
    throw DimensionMismatch("gnb query has " + std::to_string(query.size()) +
                            " features, model expects " + std::to_string(model.means.cols()));
  }

  double log_joint[2];
  for (int c = 0; c < 2; ++c) {
    double acc = std::log(model.priors(c));
    for (Eigen::Index j = 0; j < query.size(); ++j) {
      const double var = model.variances(c, j);
      const double diff = query(j) - model.means(c, j);
      acc += -0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
    }
    log_joint[c] = acc;
  }

  // posterior(1) through the logistic of the log-odds keeps the pair summing
  // to exactly one.
  GnbPrediction pred;
  const double p1 = 1.0 / (1.0 + std::exp(log_joint[0] - log_joint[1]));
  pred.posterior << 1.0 - p1, p1;
  pred.label = log_joint[1] >= log_joint[0] ? 1 : 0;
  return pred;
}

std::vector<int> gnb_predict_batch(const GnbModel& model, const Eigen::MatrixXd& queries) {
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = gnb_predict(model, Eigen::VectorXd(queries.row(i))).label;
  }
  return out;
}

}  // namespace epiwave
