#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace epiwave {

// Column-wise z-scoring with training statistics; near-constant columns get
// a unit scale so they pass through centered.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& train);
  static Standardizer identity(Eigen::Index cols);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
};

// ---- k-nearest neighbours ----

struct KnnModel {
  int k = 5;  // odd; even requests are bumped up at construction
  Eigen::MatrixXd train_points;
  std::vector<int> train_labels;
};

KnnModel knn_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels, int k = 5);
int knn_predict(const KnnModel& model, const Eigen::VectorXd& query);
std::vector<int> knn_predict_batch(const KnnModel& model, const Eigen::MatrixXd& queries);

// ---- Gaussian naive Bayes ----

struct GnbModel {
  Eigen::Vector2d priors;
  Eigen::MatrixXd means;      // 2 x f
  Eigen::MatrixXd variances;  // 2 x f, floored
  double var_floor = 0.0;
};

struct GnbPrediction {
  int label = 0;
  Eigen::Vector2d posterior;  // sums to 1
};

GnbModel gnb_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels);
GnbPrediction gnb_predict(const GnbModel& model, const Eigen::VectorXd& query);
std::vector<int> gnb_predict_batch(const GnbModel& model, const Eigen::MatrixXd& queries);

// ---- soft-margin linear SVM ----

struct SvmModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double C = 1.0;
  Eigen::VectorXd support_alphas;  // dual coefficients, one per training row
  double kkt_tolerance = 1e-3;
};

struct SvmFitOptions {
  double C = 1.0;
  double kkt_tolerance = 1e-3;
  std::uint64_t max_updates = 5'000'000;  // take_step budget before giving up
  std::uint64_t seed = 0x5eedf00d;        // working-pair selection
};

// Sequential minimal optimization on the soft-margin dual; deterministic
// given data and options. Throws ConvergenceError when the update budget
// runs out before a KKT-clean sweep.
SvmModel svm_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels,
                 const SvmFitOptions& options = {});
SvmModel svm_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels, double C);

// sign(w.x + b) mapped to {0,1}; an exact zero maps to 1.
int svm_predict(const SvmModel& model, const Eigen::VectorXd& query);
std::vector<int> svm_predict_batch(const SvmModel& model, const Eigen::MatrixXd& queries);

// ---- uniform train/predict bundle ----

struct ModelBundle {
  std::string classifier_id;  // "knn", "svm", "nb"
  bool standardized = false;
  Standardizer stats;
  std::variant<KnnModel, GnbModel, SvmModel> model;
};

ModelBundle fit_bundle(const std::string& classifier_id, const Eigen::MatrixXd& raw_train,
                       const std::vector<int>& labels, bool standardize, int knn_k, double svm_c);
std::vector<int> bundle_predict(const ModelBundle& bundle, const Eigen::MatrixXd& raw_rows);

void save_model_bundle(const std::filesystem::path& file, const ModelBundle& bundle);
ModelBundle load_model_bundle(const std::filesystem::path& file);

}  // namespace epiwave
