#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "epiwave/classifiers.hpp"
#include "epiwave/errors.hpp"

namespace epiwave {

namespace {

constexpr double kAlphaSnap = 1e-8;  // distance from the box edge that counts as on it
constexpr double kStepEps = 1e-12;   // minimum useful alpha change

// One SMO run over the soft-margin linear dual. Errors are evaluated from
// the maintained (w, b) rather than a cache; with tens of features that is
// cheaper than keeping the cache coherent.
class SmoSolver {
public:
  SmoSolver(const Eigen::MatrixXd& x, std::vector<double> y, const SvmFitOptions& options)
      : x_(x),
        y_(std::move(y)),
        n_(x.rows()),
        c_(options.C),
        tol_(options.kkt_tolerance),
        budget_(options.max_updates),
        rng_(options.seed),
        alpha_(Eigen::VectorXd::Zero(x.rows())),
        w_(Eigen::VectorXd::Zero(x.cols())) {}

  void solve() {
    bool examine_all = true;
    std::size_t changed = 0;
    while (changed > 0 || examine_all) {
      refresh_weights();
      changed = 0;
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (!examine_all && !is_free(alpha_(i))) continue;
        changed += examine(i) ? 1 : 0;
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;  // one final clean full sweep certifies KKT
      }
      if (updates_ > budget_) throw ConvergenceError(updates_);
    }
    refresh_weights();
    if (count_violations() > 0) throw ConvergenceError(updates_);
  }

  SvmModel finish() {
    SvmModel model;
    model.C = c_;
    model.kkt_tolerance = tol_;
    model.support_alphas = alpha_;
    model.weights = Eigen::VectorXd::Zero(x_.cols());
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (alpha_(i) != 0.0) model.weights += alpha_(i) * y_[static_cast<std::size_t>(i)] * x_.row(i).transpose();
    }
    // Prefer the margin support vectors for the bias; fall back to the
    // maintained running value when every multiplier sits on the box.
    double sum = 0.0;
    int free_count = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (is_free(alpha_(i))) {
        sum += y_[static_cast<std::size_t>(i)] - model.weights.dot(x_.row(i).transpose());
        ++free_count;
      }
    }
    model.bias = free_count > 0 ? sum / free_count : b_;
    return model;
  }

private:
  bool is_free(double a) const { return a > kAlphaSnap && a < c_ - kAlphaSnap; }

  double decision(Eigen::Index i) const { return w_.dot(x_.row(i).transpose()) + b_; }
  double error(Eigen::Index i) const { return decision(i) - y_[static_cast<std::size_t>(i)]; }

  void refresh_weights() {
    w_.setZero();
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (alpha_(i) != 0.0) w_ += alpha_(i) * y_[static_cast<std::size_t>(i)] * x_.row(i).transpose();
    }
  }

  std::size_t count_violations() const {
    std::size_t violations = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double r = error(i) * y_[static_cast<std::size_t>(i)];
      if ((r < -tol_ && alpha_(i) < c_ - kAlphaSnap) || (r > tol_ && alpha_(i) > kAlphaSnap)) {
        ++violations;
      }
    }
    return violations;
  }

  bool examine(Eigen::Index i2) {
    const double e2 = error(i2);
    const double r2 = e2 * y_[static_cast<std::size_t>(i2)];
    const bool violates =
        (r2 < -tol_ && alpha_(i2) < c_ - kAlphaSnap) || (r2 > tol_ && alpha_(i2) > kAlphaSnap);
    if (!violates) return false;

    // Second choice: widest error gap first, then sweeps from a seeded
    // starting point over the free multipliers and finally everything.
    Eigen::Index best = -1;
    double best_gap = -1.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (i == i2 || !is_free(alpha_(i))) continue;
      const double gap = std::abs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best >= 0 && take_step(best, i2, e2)) return true;

    const Eigen::Index offset = static_cast<Eigen::Index>(rng_() % static_cast<std::uint64_t>(n_));
    for (Eigen::Index step = 0; step < n_; ++step) {
      const Eigen::Index i1 = (offset + step) % n_;
      if (i1 == i2 || !is_free(alpha_(i1))) continue;
      if (take_step(i1, i2, e2)) return true;
    }
    for (Eigen::Index step = 0; step < n_; ++step) {
      const Eigen::Index i1 = (offset + step) % n_;
      if (i1 == i2) continue;
      if (take_step(i1, i2, e2)) return true;
    }
    return false;
  }

  bool take_step(Eigen::Index i1, Eigen::Index i2, double e2) {
    ++updates_;
    const double y1 = y_[static_cast<std::size_t>(i1)];
    const double y2 = y_[static_cast<std::size_t>(i2)];
    const double a1_old = alpha_(i1);
    const double a2_old = alpha_(i2);
    const double s = y1 * y2;
    const double e1 = error(i1);

    double low, high;
    if (y1 != y2) {
      low = std::max(0.0, a2_old - a1_old);
      high = std::min(c_, c_ + a2_old - a1_old);
    } else {
      low = std::max(0.0, a1_old + a2_old - c_);
      high = std::min(c_, a1_old + a2_old);
    }
    if (low >= high) return false;

    const double k11 = x_.row(i1).squaredNorm();
    const double k22 = x_.row(i2).squaredNorm();
    const double k12 = x_.row(i1).dot(x_.row(i2));
    const double eta = k11 + k22 - 2.0 * k12;

    double a2;
    if (eta > 0.0) {
      a2 = std::clamp(a2_old + y2 * (e1 - e2) / eta, low, high);
    } else {
      // Degenerate curvature: evaluate the dual objective at both ends.
      const double f1 = y1 * (e1 + b_) - a1_old * k11 - s * a2_old * k12;
      const double f2 = y2 * (e2 + b_) - s * a1_old * k12 - a2_old * k22;
      const double l1 = a1_old + s * (a2_old - low);
      const double h1 = a1_old + s * (a2_old - high);
      const double obj_low =
          l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11 + 0.5 * low * low * k22 + s * low * l1 * k12;
      const double obj_high =
          h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11 + 0.5 * high * high * k22 + s * high * h1 * k12;
      if (obj_low < obj_high - kStepEps) {
        a2 = low;
      } else if (obj_low > obj_high + kStepEps) {
        a2 = high;
      } else {
        return false;
      }
    }

    if (a2 < kAlphaSnap) a2 = 0.0;
    if (a2 > c_ - kAlphaSnap) a2 = c_;
    if (std::abs(a2 - a2_old) < kStepEps * (a2 + a2_old + kStepEps)) return false;

    double a1 = a1_old + s * (a2_old - a2);
    a1 = std::clamp(a1, 0.0, c_);

    const double d1 = y1 * (a1 - a1_old);
    const double d2 = y2 * (a2 - a2_old);
    const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
    if (a1 > 0.0 && a1 < c_) {
      b_ = b1;
    } else if (a2 > 0.0 && a2 < c_) {
      b_ = b2;
    } else {
      b_ = 0.5 * (b1 + b2);
    }

    w_ += d1 * x_.row(i1).transpose() + d2 * x_.row(i2).transpose();
    alpha_(i1) = a1;
    alpha_(i2) = a2;
    return true;
  }

  const Eigen::MatrixXd& x_;
  std::vector<double> y_;
  Eigen::Index n_;
  double c_;
  double tol_;
  std::uint64_t budget_;
  std::mt19937_64 rng_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd w_;
  double b_ = 0.0;
  std::uint64_t updates_ = 0;
};

}  // namespace

SvmModel svm_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels,
                 const SvmFitOptions& options) {
  if (static_cast<std::size_t>(train.rows()) != labels.size()) {
    throw DimensionMismatch("svm_fit: row/label count mismatch");
  }
  if (options.C <= 0.0) throw InvalidArgument("svm C must be positive");

  std::vector<double> y(labels.size());
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw LabelError("svm labels must be 0 or 1");
    seen[labels[i]] = true;
    y[i] = labels[i] == 1 ? 1.0 : -1.0;
  }
  if (!seen[0] || !seen[1]) throw SingleClassError("svm_fit needs both classes");

  SmoSolver solver(train, std::move(y), options);
  solver.solve();
  return solver.finish();
}

SvmModel svm_fit(const Eigen::MatrixXd& train, const std::vector<int>& labels, double C) {
  SvmFitOptions options;
  options.C = C;
  return svm_fit(train, labels, options);
}

int svm_predict(const SvmModel& model, const Eigen::VectorXd& query) {
  if (query.size() != model.weights.size()) {
    throw DimensionMismatch("svm query has " + std::to_string(query.size()) +
                            " features, model expects " + std::to_string(model.weights.size()));
  }
  return model.weights.dot(query) + model.bias >= 0.0 ? 1 : 0;
}

std::vector<int> svm_predict_batch(const SvmModel& model, const Eigen::MatrixXd& queries) {
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = svm_predict(model, Eigen::VectorXd(queries.row(i)));
  }
  return out;
}

}  // namespace epiwave
