#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "epiwave/dwt.hpp"
#include "epiwave/pca.hpp"

namespace epiwave {

// Per-band coefficient matrices for a pool of segments; row i of every band
// comes from segment i.
struct BandMatrixSet {
  std::vector<std::string> band_names;      // A5, D5, ..., D1
  std::vector<Eigen::MatrixXd> matrices;    // one n x band_length matrix per band
  std::vector<int> labels;                  // n

  Eigen::Index rows() const { return matrices.empty() ? 0 : matrices.front().rows(); }
  const Eigen::MatrixXd& band(std::string_view name) const;  // throws BandMissing
};

BandMatrixSet assemble_band_matrices(const std::vector<WaveletDecomposition>& decompositions,
                                     const std::vector<int>& labels);

// Row subset in the given index order (split plans produce ascending indices).
BandMatrixSet slice_rows(const BandMatrixSet& set, const std::vector<int>& indices);

// Elementwise maximum across two or more equally shaped score matrices.
Eigen::MatrixXd fuse_max(const std::vector<Eigen::MatrixXd>& score_matrices);

enum class ExtractorId { PcaMaxFusion, Stats7 };
std::string to_string(ExtractorId id);
ExtractorId extractor_from_string(std::string_view name);

struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  ExtractorId extractor = ExtractorId::PcaMaxFusion;
};

struct PcaMaxOptions {
  int k = 50;
  bool allow_rank_truncation = false;  // clamp k instead of failing when infeasible
  bool zscore_before_pca = false;
  bool fit_on_all = false;             // fit PCA on train+test rows (leakage probe)
  std::vector<std::string> bands;      // empty selects all bands of the set
};

struct PcaMaxResult {
  FeatureMatrix train;
  FeatureMatrix test;
  std::vector<PcaModel> models;          // aligned with bands_used
  std::vector<std::string> bands_used;
  int k_used = 0;
  bool k_clamped = false;
};

// Per band: fit PCA on the training rows, project both row sets, then fuse
// the per-band score matrices with the elementwise max.
PcaMaxResult extract_pca_max_features(const BandMatrixSet& train, const BandMatrixSet& test,
                                      const PcaMaxOptions& options = {});

// [mean, sample std, min, max, median, skewness, excess kurtosis];
// skewness and kurtosis are defined as 0 when the std is below 1e-12.
std::array<double, 7> stats7(std::span<const double> band);

extern const std::array<std::string, 7> kStats7Names;

FeatureMatrix extract_stats_features(const BandMatrixSet& set);

// CSV artifact: header feature_names + "label", one row per segment.
void write_feature_csv(const std::filesystem::path& file, const FeatureMatrix& features,
                       const std::string& comment = "");
FeatureMatrix load_feature_csv(const std::filesystem::path& file);

}  // namespace epiwave
