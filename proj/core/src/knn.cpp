#include <algorithm>
#include <utility>
#include <vector>

#include "epiwave/classifiers.hpp"
#include "epiwave/errors.hpp"

namespace epiwave {

Standardizer Standardizer::fit(const Eigen::MatrixXd& train) {
  Standardizer s;
  s.mean = train.colwise().mean();
  if (train.rows() < 2) {
    s.scale = Eigen::RowVectorXd::Ones(train.cols());
    return s;
  }
  const Eigen::ArrayXd var = (train.rowwise() - s.mean).array().square().colwise().sum() /
                             static_cast<double>(train.rows() - 1);
  s.scale = var.sqrt().transpose();
  for (Eigen::Index c = 0; c < s.scale.size(); ++c) {
    if (s.scale(c) < 1e-12) s.scale(c) = 1.0;
  }
  return s;
}

Standardizer Standardizer::identity(Eigen::Index cols) {
  Standardizer s;
  s.mean = Eigen::RowVectorXd::Zero(cols);
  s.scale = Eigen::RowVectorXd::Ones(cols);
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean.size()) {
    throw DimensionMismatch("standardizer expects " + std::to_string(mean.size()) +
                            " columns, got " + std::to_string(rows.cols()));
  }
  return (rows.rowwise() - mean).array().rowwise() / scale.array();
}

KnnModel knn_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels, int k) {
  if (train.rows() == 0) throw InvalidArgument("knn_fit needs a nonempty training set");
  if (static_cast<std::size_t>(train.rows()) != labels.size()) {
    throw DimensionMismatch("knn_fit: row/label count mismatch");
  }
  if (k < 1) throw InvalidArgument("knn k must be positive");
  if (k % 2 == 0) ++k;  // vote ties are impossible with odd k
  if (k > train.rows()) {
    throw InvalidArgument("knn k=" + std::to_string(k) + " exceeds training size " +
                          std::to_string(train.rows()));
  }
  return KnnModel{k, train, labels};
}

int knn_predict(const KnnModel& model, const Eigen::VectorXd& query) {
  if (query.size() != model.train_points.cols()) {
    throw DimensionMismatch("knn query has " + std::to_string(query.size()) +
                            " features, model expects " +
                            std::to_string(model.train_points.cols()));
  }

  const Eigen::Index n = model.train_points.rows();
  std::vector<std::pair<double, int>> by_distance(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d2 = (model.train_points.row(i).transpose() - query).squaredNorm();
    by_distance[static_cast<std::size_t>(i)] = {d2, static_cast<int>(i)};
  }
  // Distance ties fall to the lower training index.
  std::partial_sort(by_distance.begin(), by_distance.begin() + model.k, by_distance.end());

  int votes_for_positive = 0;
  for (int j = 0; j < model.k; ++j) {
    votes_for_positive += model.train_labels[static_cast<std::size_t>(by_distance[j].second)];
  }
  return votes_for_positive * 2 > model.k ? 1 : 0;
}

std::vector<int> knn_predict_batch(const KnnModel& model, const Eigen::MatrixXd& queries) {
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = knn_predict(model, Eigen::VectorXd(queries.row(i)));
  }
  return out;
}

}  // namespace epiwave
