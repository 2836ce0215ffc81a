#include "epiwave/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "epiwave/errors.hpp"
#include "epiwave/text_io.hpp"

namespace epiwave {

const std::array<std::string, 7> kStats7Names = {"mean", "std",      "min",     "max",
                                                 "median", "skewness", "kurtosis"};

const Eigen::MatrixXd& BandMatrixSet::band(std::string_view name) const {
  for (std::size_t i = 0; i < band_names.size(); ++i) {
    if (band_names[i] == name) return matrices[i];
  }
  throw BandMissing(std::string(name));
}

BandMatrixSet assemble_band_matrices(const std::vector<WaveletDecomposition>& decompositions,
                                     const std::vector<int>& labels) {
  if (decompositions.size() < 2) {
    throw InvalidArgument("assemble_band_matrices needs at least 2 segments");
  }
  if (labels.size() != decompositions.size()) {
    throw DimensionMismatch("labels length " + std::to_string(labels.size()) +
                            " != segment count " + std::to_string(decompositions.size()));
  }

  const WaveletDecomposition& first = decompositions.front();
  for (const auto& dec : decompositions) {
    if (dec.family != first.family || dec.levels != first.levels) {
      throw InconsistentDecomposition("decompositions mix families or depths");
    }
  }

  BandMatrixSet set;
  set.labels = labels;
  set.band_names = first.band_names();
  set.matrices.reserve(set.band_names.size());

  const Eigen::Index n = static_cast<Eigen::Index>(decompositions.size());
  for (const std::string& name : set.band_names) {
    const std::size_t width = first.band(name).size();
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(width));
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::vector<double>& coeffs = decompositions[static_cast<std::size_t>(i)].band(name);
      if (coeffs.size() != width) {
        throw InconsistentDecomposition("band " + name + " has length " +
                                        std::to_string(coeffs.size()) + " in segment " +
                                        std::to_string(i) + ", expected " + std::to_string(width));
      }
      m.row(i) = Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                                   static_cast<Eigen::Index>(width))
                     .transpose();
    }
    set.matrices.push_back(std::move(m));
  }
  return set;
}

BandMatrixSet slice_rows(const BandMatrixSet& set, const std::vector<int>& indices) {
  BandMatrixSet out;
  out.band_names = set.band_names;
  out.labels.reserve(indices.size());
  for (const int i : indices) {
    if (i < 0 || i >= static_cast<int>(set.labels.size())) {
      throw InvalidArgument("row index " + std::to_string(i) + " out of range");
    }
    out.labels.push_back(set.labels[static_cast<std::size_t>(i)]);
  }
  out.matrices.reserve(set.matrices.size());
  for (const Eigen::MatrixXd& m : set.matrices) {
    Eigen::MatrixXd sliced(static_cast<Eigen::Index>(indices.size()), m.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      sliced.row(static_cast<Eigen::Index>(r)) = m.row(indices[r]);
    }
    out.matrices.push_back(std::move(sliced));
  }
  return out;
}

Eigen::MatrixXd fuse_max(const std::vector<Eigen::MatrixXd>& score_matrices) {
  if (score_matrices.size() < 2) {
    throw InvalidArgument("fuse_max needs at least 2 matrices, got " +
                          std::to_string(score_matrices.size()));
  }
  const Eigen::Index rows = score_matrices.front().rows();
  const Eigen::Index cols = score_matrices.front().cols();
  Eigen::MatrixXd fused = score_matrices.front();
  for (std::size_t b = 1; b < score_matrices.size(); ++b) {
    const Eigen::MatrixXd& m = score_matrices[b];
    if (m.rows() != rows || m.cols() != cols) {
      throw DimensionMismatch("fuse_max matrix " + std::to_string(b) + " is " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                              ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    fused = fused.cwiseMax(m);
  }
  return fused;
}

std::string to_string(ExtractorId id) {
  switch (id) {
    case ExtractorId::PcaMaxFusion: return "pca_max_fusion";
    case ExtractorId::Stats7: return "stats7";
  }
  return "?";
}

ExtractorId extractor_from_string(std::string_view name) {
  if (name == "pca_max_fusion") return ExtractorId::PcaMaxFusion;
  if (name == "stats7") return ExtractorId::Stats7;
  throw InvalidArgument("unknown extractor: " + std::string(name));
}

namespace {

// Optional per-column standardization of a band before PCA, using training
// statistics for both row sets.
void zscore_pair(Eigen::MatrixXd& train, Eigen::MatrixXd& test) {
  const Eigen::RowVectorXd mean = train.colwise().mean();
  Eigen::RowVectorXd std_dev =
      ((train.rowwise() - mean).array().square().colwise().sum() /
       std::max<double>(1.0, static_cast<double>(train.rows() - 1)))
          .sqrt();
  std_dev = std_dev.cwiseMax(1e-12);
  train = (train.rowwise() - mean).array().rowwise() / std_dev.array();
  if (test.rows() > 0) {
    test = (test.rowwise() - mean).array().rowwise() / std_dev.array();
  }
}

}  // namespace

PcaMaxResult extract_pca_max_features(const BandMatrixSet& train, const BandMatrixSet& test,
                                      const PcaMaxOptions& options) {
  if (train.band_names.empty()) throw InvalidArgument("empty band set");
  if (test.rows() > 0 && test.band_names != train.band_names) {
    throw InconsistentDecomposition("train and test band sets disagree");
  }

  PcaMaxResult result;
  result.bands_used = options.bands.empty() ? train.band_names : options.bands;

  const Eigen::Index n_train = train.rows();
  const Eigen::Index n_fit = options.fit_on_all ? n_train + test.rows() : n_train;

  // Feasible component count across the selected bands.
  int k = options.k;
  for (const std::string& name : result.bands_used) {
    const int feasible = static_cast<int>(std::min<Eigen::Index>(train.band(name).cols(), n_fit - 1));
    if (k > feasible) {
      if (!options.allow_rank_truncation) {
        throw RankError("k=" + std::to_string(k) + " infeasible for band " + name +
                        " (max " + std::to_string(feasible) + ")");
      }
      k = feasible;
      result.k_clamped = true;
    }
  }
  if (k < 1) throw RankError("no usable components");
  result.k_used = k;

  std::vector<Eigen::MatrixXd> train_scores, test_scores;
  for (const std::string& name : result.bands_used) {
    Eigen::MatrixXd train_band = train.band(name);
    Eigen::MatrixXd test_band =
        test.rows() > 0 ? test.band(name) : Eigen::MatrixXd(0, train_band.cols());
    if (options.zscore_before_pca) zscore_pair(train_band, test_band);

    PcaModel model;
    if (options.fit_on_all && test_band.rows() > 0) {
      Eigen::MatrixXd all(train_band.rows() + test_band.rows(), train_band.cols());
      all << train_band, test_band;
      model = pca_fit(all, k);
    } else {
      model = pca_fit(train_band, k);
    }
    train_scores.push_back(pca_transform(model, train_band));
    test_scores.push_back(pca_transform(model, test_band));
    result.models.push_back(std::move(model));
  }

  auto fuse = [](std::vector<Eigen::MatrixXd>& scores) {
    return scores.size() == 1 ? scores.front() : fuse_max(scores);
  };

  result.train.values = fuse(train_scores);
  result.train.labels = train.labels;
  result.train.extractor = ExtractorId::PcaMaxFusion;
  result.test.values = test.rows() > 0 ? fuse(test_scores) : Eigen::MatrixXd(0, k);
  result.test.labels = test.labels;
  result.test.extractor = ExtractorId::PcaMaxFusion;
  for (int j = 0; j < k; ++j) {
    result.train.feature_names.push_back("pc" + std::to_string(j + 1));
  }
  result.test.feature_names = result.train.feature_names;

  if (!result.train.values.allFinite() || !result.test.values.allFinite()) {
    throw NonFiniteInput("fused feature matrix contains NaN or Inf");
  }
  return result;
}

std::array<double, 7> stats7(std::span<const double> band) {
  const std::size_t n = band.size();
  if (n < 2) throw SignalTooShort("stats7 needs at least 2 samples, got " + std::to_string(n));

  double sum = 0.0;
  double lo = band[0], hi = band[0];
  for (const double v : band) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double mean = sum / static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const double v : band) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double var_pop = m2 / static_cast<double>(n);
  const double std_sample = std::sqrt(m2 / static_cast<double>(n - 1));

  std::vector<double> sorted(band.begin(), band.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = (n % 2 == 1)
                            ? sorted[n / 2]
                            : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  double skewness = 0.0, kurtosis = 0.0;
  if (std_sample >= 1e-12) {
    const double m3n = m3 / static_cast<double>(n);
    const double m4n = m4 / static_cast<double>(n);
    skewness = m3n / std::pow(var_pop, 1.5);
    kurtosis = m4n / (var_pop * var_pop) - 3.0;  // excess
  }
  return {mean, std_sample, lo, hi, median, skewness, kurtosis};
}

FeatureMatrix extract_stats_features(const BandMatrixSet& set) {
  if (set.band_names.empty()) throw InvalidArgument("empty band set");

  const Eigen::Index n = set.rows();
  const std::size_t n_bands = set.band_names.size();
  FeatureMatrix features;
  features.extractor = ExtractorId::Stats7;
  features.labels = set.labels;
  features.values.resize(n, static_cast<Eigen::Index>(n_bands * 7));

  for (std::size_t b = 0; b < n_bands; ++b) {
    for (const std::string& stat : kStats7Names) {
      features.feature_names.push_back(set.band_names[b] + "." + stat);
    }
    const Eigen::MatrixXd& m = set.matrices[b];
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Map<Eigen::VectorXd>(row.data(), m.cols()) = m.row(i).transpose();
      const auto stats = stats7(row);
      for (std::size_t s = 0; s < stats.size(); ++s) {
        features.values(i, static_cast<Eigen::Index>(b * 7 + s)) = stats[s];
      }
    }
  }

  if (!features.values.allFinite()) throw NonFiniteInput("stats7 features contain NaN or Inf");
  return features;
}

void write_feature_csv(const std::filesystem::path& file, const FeatureMatrix& features,
                       const std::string& comment) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "# extractor=" << to_string(features.extractor) << '\n';
  for (std::size_t i = 0; i < features.feature_names.size(); ++i) {
    out << features.feature_names[i] << ',';
  }
  out << "label\n";
  for (Eigen::Index r = 0; r < features.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.values.cols(); ++c) {
      out << fmt_full(features.values(r, c)) << ',';
    }
    out << features.labels[static_cast<std::size_t>(r)] << '\n';
  }
}

FeatureMatrix load_feature_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());

  FeatureMatrix features;
  std::string line;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '#') {
      const std::string_view tag = "# extractor=";
      if (stripped.substr(0, tag.size()) == tag) {
        features.extractor = extractor_from_string(std::string(stripped.substr(tag.size())));
      }
      continue;
    }
    const auto cells = split(stripped, ',');
    if (!have_header) {
      if (cells.size() < 2 || cells.back() != "label") {
        throw IoError("feature csv header must end with 'label': " + file.string());
      }
      features.feature_names.assign(cells.begin(), cells.end() - 1);
      have_header = true;
      continue;
    }
    if (cells.size() != features.feature_names.size() + 1) {
      throw IoError("feature csv row width mismatch in " + file.string());
    }
    std::vector<double> row(features.feature_names.size());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = parse_double(cells[i]);
    rows.push_back(std::move(row));
    features.labels.push_back(static_cast<int>(parse_int(cells.back())));
  }
  if (!have_header) throw IoError("empty feature csv: " + file.string());

  features.values.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(features.feature_names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      features.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return features;
}

}  // namespace epiwave
