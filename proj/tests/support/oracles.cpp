#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracles {

std::pair<std::vector<double>, std::vector<double>> dwt_step(const std::vector<double>& signal,
                                                             const std::vector<double>& low,
                                                             const std::vector<double>& high) {
  const std::size_t n = signal.size();
  const std::size_t L = low.size();

  // Explicit half-sample symmetric extension buffer with L-1 pad per side.
  std::vector<double> padded;
  padded.reserve(n + 2 * (L - 1));
  auto mirrored = [&](long long t) {
    while (t < 0 || t >= static_cast<long long>(n)) {
      if (t < 0) t = -1 - t;
      if (t >= static_cast<long long>(n)) t = 2 * static_cast<long long>(n) - 1 - t;
    }
    return signal[static_cast<std::size_t>(t)];
  };
  for (long long t = -(static_cast<long long>(L) - 1); t < static_cast<long long>(n + L - 1); ++t) {
    padded.push_back(mirrored(t));
  }

  // Textbook full convolution of the padded buffer.
  auto full_conv = [&](const std::vector<double>& h) {
    std::vector<double> y(padded.size() + h.size() - 1, 0.0);
    for (std::size_t i = 0; i < padded.size(); ++i) {
      for (std::size_t k = 0; k < h.size(); ++k) {
        y[i + k] += padded[i] * h[k];
      }
    }
    return y;
  };
  const std::vector<double> y_low = full_conv(low);
  const std::vector<double> y_high = full_conv(high);

  // Valid region starts where the filter fully overlaps the buffer; keep
  // the odd samples of it.
  const std::size_t valid_start = L - 1;
  const std::size_t out_n = (n + L - 1) / 2;
  std::vector<double> approx(out_n), detail(out_n);
  for (std::size_t i = 0; i < out_n; ++i) {
    approx[i] = y_low[valid_start + 1 + 2 * i];
    detail[i] = y_high[valid_start + 1 + 2 * i];
  }
  return {approx, detail};
}

JacobiResult jacobi_eigen(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-26) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a[i][p];
          const double aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a[p][i];
          const double aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i][p];
          const double viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });

  JacobiResult result;
  result.values.resize(n);
  result.vectors.assign(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    result.values[r] = a[order[r]][order[r]];
    for (std::size_t i = 0; i < n; ++i) result.vectors[r][i] = v[i][order[r]];
  }
  return result;
}

std::vector<std::vector<double>> covariance(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  std::vector<double> mean(d, 0.0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]);
      }
    }
  }
  for (auto& r : cov) {
    for (double& x : r) x /= static_cast<double>(n - 1);
  }
  return cov;
}

int knn(const std::vector<std::vector<double>>& train, const std::vector<int>& labels,
        const std::vector<double>& query, int k) {
  std::vector<std::pair<double, int>> all;
  for (std::size_t i = 0; i < train.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double d = train[i][j] - query[j];
      d2 += d * d;
    }
    all.emplace_back(d2, static_cast<int>(i));
  }
  std::sort(all.begin(), all.end());
  int votes = 0;
  for (int j = 0; j < k; ++j) votes += labels[static_cast<std::size_t>(all[j].second)];
  return 2 * votes > k ? 1 : 0;
}

double gnb_posterior1(const std::vector<double>& priors,
                      const std::vector<std::vector<double>>& means,
                      const std::vector<std::vector<double>>& vars,
                      const std::vector<double>& query) {
  double joint[2];
  for (int c = 0; c < 2; ++c) {
    double p = priors[static_cast<std::size_t>(c)];
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double var = vars[static_cast<std::size_t>(c)][j];
      const double diff = query[j] - means[static_cast<std::size_t>(c)][j];
      p *= std::exp(-diff * diff / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
    }
    joint[c] = p;
  }
  return joint[1] / (joint[0] + joint[1]);
}

double svm_dual_value(const Eigen::MatrixXd& x, const std::vector<double>& y,
                      const Eigen::VectorXd& alpha) {
  double value = alpha.sum();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (alpha(i) == 0.0) continue;
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      if (alpha(j) == 0.0) continue;
      value -= 0.5 * alpha(i) * alpha(j) * y[static_cast<std::size_t>(i)] *
               y[static_cast<std::size_t>(j)] * x.row(i).dot(x.row(j));
    }
  }
  return value;
}

Eigen::VectorXd random_feasible_alpha(const std::vector<double>& y, double c,
                                      std::mt19937_64& rng) {
  const std::size_t n = y.size();
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(n));
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    return lo + u * (hi - lo);
  };
  for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha(i) = uniform(0.0, c);

  // Repair the equality constraint by draining mass from coordinates whose
  // label sign matches the residual.
  for (int pass = 0; pass < 1000; ++pass) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += alpha(static_cast<Eigen::Index>(i)) * y[i];
    if (std::abs(s) < 1e-12) break;
    for (std::size_t i = 0; i < n && std::abs(s) >= 1e-12; ++i) {
      const Eigen::Index idx = static_cast<Eigen::Index>((rng() % n));
      if (y[static_cast<std::size_t>(idx)] * s > 0.0 && alpha(idx) > 0.0) {
        const double delta = std::min(alpha(idx), std::abs(s));
        alpha(idx) -= delta;
        s -= y[static_cast<std::size_t>(idx)] * delta;
      }
    }
  }
  return alpha;
}

}  // namespace oracles
