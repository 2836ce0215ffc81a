#include <fstream>
#include <map>
#include <sstream>

#include "epiwave/classifiers.hpp"
#include "epiwave/errors.hpp"
#include "epiwave/text_io.hpp"

namespace epiwave {

namespace {

void write_vector(std::ostream& out, const std::string& key, const double* values,
                  Eigen::Index count) {
  out << key << ' ' << count;
  for (Eigen::Index i = 0; i < count; ++i) out << ' ' << fmt_full(values[i]);
  out << '\n';
}

Eigen::VectorXd read_vector(const std::vector<std::string>& tokens, const std::string& file) {
  if (tokens.size() < 2) throw IoError("truncated vector line in " + file);
  const Eigen::Index count = static_cast<Eigen::Index>(parse_int(tokens[1]));
  if (static_cast<Eigen::Index>(tokens.size()) != count + 2) {
    throw IoError("vector length mismatch in " + file);
  }
  Eigen::VectorXd v(count);
  for (Eigen::Index i = 0; i < count; ++i) v(i) = parse_double(tokens[static_cast<std::size_t>(i) + 2]);
  return v;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

}  // namespace

ModelBundle fit_bundle(const std::string& classifier_id, const Eigen::MatrixXd& raw_train,
                       const std::vector<int>& labels, bool standardize, int knn_k, double svm_c) {
  ModelBundle bundle;
  bundle.classifier_id = classifier_id;

  // GNB works on raw features; distance- and margin-based models are
  // scale-sensitive and use the training z-scoring.
  const bool use_scaling = standardize && classifier_id != "nb";
  bundle.standardized = use_scaling;
  bundle.stats = use_scaling ? Standardizer::fit(raw_train) : Standardizer::identity(raw_train.cols());
  const Eigen::MatrixXd train = use_scaling ? bundle.stats.apply(raw_train) : raw_train;

  if (classifier_id == "knn") {
    bundle.model = knn_fit(train, labels, knn_k);
  } else if (classifier_id == "nb") {
    bundle.model = gnb_fit(train, labels);
  } else if (classifier_id == "svm") {
    bundle.model = svm_fit(train, labels, svm_c);
  } else {
    throw InvalidArgument("unknown classifier id: " + classifier_id);
  }
  return bundle;
}

std::vector<int> bundle_predict(const ModelBundle& bundle, const Eigen::MatrixXd& raw_rows) {
  const Eigen::MatrixXd rows = bundle.standardized ? bundle.stats.apply(raw_rows) : raw_rows;
  if (std::holds_alternative<KnnModel>(bundle.model)) {
    return knn_predict_batch(std::get<KnnModel>(bundle.model), rows);
  }
  if (std::holds_alternative<GnbModel>(bundle.model)) {
    return gnb_predict_batch(std::get<GnbModel>(bundle.model), rows);
  }
  return svm_predict_batch(std::get<SvmModel>(bundle.model), rows);
}

void save_model_bundle(const std::filesystem::path& file, const ModelBundle& bundle) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "epiwave-model v1\n";
  out << "classifier " << bundle.classifier_id << '\n';
  out << "standardized " << (bundle.standardized ? 1 : 0) << '\n';
  write_vector(out, "scale_mean", bundle.stats.mean.data(), bundle.stats.mean.size());
  write_vector(out, "scale_std", bundle.stats.scale.data(), bundle.stats.scale.size());

  if (const auto* knn = std::get_if<KnnModel>(&bundle.model)) {
    out << "knn_k " << knn->k << '\n';
    out << "rows " << knn->train_points.rows() << ' ' << knn->train_points.cols() << '\n';
    for (Eigen::Index r = 0; r < knn->train_points.rows(); ++r) {
      const Eigen::VectorXd row = knn->train_points.row(r);
      write_vector(out, "row", row.data(), row.size());
    }
    out << "labels " << knn->train_labels.size();
    for (const int l : knn->train_labels) out << ' ' << l;
    out << '\n';
  } else if (const auto* gnb = std::get_if<GnbModel>(&bundle.model)) {
    write_vector(out, "priors", gnb->priors.data(), 2);
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXd mean = gnb->means.row(c);
      const Eigen::VectorXd var = gnb->variances.row(c);
      write_vector(out, "class_mean", mean.data(), mean.size());
      write_vector(out, "class_var", var.data(), var.size());
    }
    out << "var_floor " << fmt_full(gnb->var_floor) << '\n';
  } else {
    const auto& svm = std::get<SvmModel>(bundle.model);
    out << "svm_c " << fmt_full(svm.C) << '\n';
    out << "kkt_tolerance " << fmt_full(svm.kkt_tolerance) << '\n';
    write_vector(out, "weights", svm.weights.data(), svm.weights.size());
    out << "bias " << fmt_full(svm.bias) << '\n';
    write_vector(out, "alphas", svm.support_alphas.data(), svm.support_alphas.size());
  }
}

ModelBundle load_model_bundle(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  const std::string fname = file.string();

  std::string line;
  if (!std::getline(in, line) || trim(line) != "epiwave-model v1") {
    throw IoError("not a model bundle: " + fname);
  }

  auto next_tokens = [&](const std::string& expect_key) {
    if (!std::getline(in, line)) throw IoError("truncated model bundle: " + fname);
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0] != expect_key) {
      throw IoError("expected '" + expect_key + "' in " + fname);
    }
    return tokens;
  };

  ModelBundle bundle;
  bundle.classifier_id = next_tokens("classifier").at(1);
  bundle.standardized = parse_int(next_tokens("standardized").at(1)) != 0;
  bundle.stats.mean = read_vector(next_tokens("scale_mean"), fname).transpose();
  bundle.stats.scale = read_vector(next_tokens("scale_std"), fname).transpose();

  if (bundle.classifier_id == "knn") {
    KnnModel knn;
    knn.k = static_cast<int>(parse_int(next_tokens("knn_k").at(1)));
    const auto dims = next_tokens("rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(parse_int(dims.at(1)));
    const Eigen::Index cols = static_cast<Eigen::Index>(parse_int(dims.at(2)));
    knn.train_points.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      knn.train_points.row(r) = read_vector(next_tokens("row"), fname).transpose();
    }
    const auto labels = next_tokens("labels");
    const std::size_t count = static_cast<std::size_t>(parse_int(labels.at(1)));
    if (labels.size() != count + 2) throw IoError("label count mismatch in " + fname);
    for (std::size_t i = 0; i < count; ++i) {
      knn.train_labels.push_back(static_cast<int>(parse_int(labels[i + 2])));
    }
    bundle.model = std::move(knn);
  } else if (bundle.classifier_id == "nb") {
    GnbModel gnb;
    const Eigen::VectorXd priors = read_vector(next_tokens("priors"), fname);
    gnb.priors << priors(0), priors(1);
    Eigen::VectorXd mean0 = read_vector(next_tokens("class_mean"), fname);
    Eigen::VectorXd var0 = read_vector(next_tokens("class_var"), fname);
    Eigen::VectorXd mean1 = read_vector(next_tokens("class_mean"), fname);
    Eigen::VectorXd var1 = read_vector(next_tokens("class_var"), fname);
    gnb.means.resize(2, mean0.size());
    gnb.variances.resize(2, var0.size());
    gnb.means.row(0) = mean0.transpose();
    gnb.means.row(1) = mean1.transpose();
    gnb.variances.row(0) = var0.transpose();
    gnb.variances.row(1) = var1.transpose();
    gnb.var_floor = parse_double(next_tokens("var_floor").at(1));
    bundle.model = std::move(gnb);
  } else if (bundle.classifier_id == "svm") {
    SvmModel svm;
    svm.C = parse_double(next_tokens("svm_c").at(1));
    svm.kkt_tolerance = parse_double(next_tokens("kkt_tolerance").at(1));
    svm.weights = read_vector(next_tokens("weights"), fname);
    svm.bias = parse_double(next_tokens("bias").at(1));
    svm.support_alphas = read_vector(next_tokens("alphas"), fname);
    bundle.model = std::move(svm);
  } else {
    throw IoError("unknown classifier id in " + fname + ": " + bundle.classifier_id);
  }
  return bundle;
}

}  // namespace epiwave
