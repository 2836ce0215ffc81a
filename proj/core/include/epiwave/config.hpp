#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "epiwave/dwt.hpp"
#include "epiwave/features.hpp"

namespace epiwave {

// Everything that parameterizes one pipeline run. All defaults resolve
// without a config file.
struct RunConfig {
  std::filesystem::path data_dir;
  std::filesystem::path output_dir = "epiwave-out";

  WaveletFamily wavelet_family = WaveletFamily::DB4;
  int levels = 5;
  int pca_k = 50;
  ExtractorId extractor = ExtractorId::PcaMaxFusion;
  std::vector<std::string> classifiers = {"knn", "svm", "nb"};
  int knn_k = 5;
  double svm_c = 1.0;
  std::uint64_t seed = 42;
  double test_fraction = 0.2;
  bool standardize = true;
  std::vector<std::string> fuse_bands;  // empty = all six bands
  bool zscore_before_pca = false;
  bool paper_mode_fit_on_all = false;
  bool allow_rank_truncation = false;
  int jobs = 0;  // 0 = one worker per case
};

// Canonical "key=value" lines, sorted by key, for the semantic fields only
// (paths, job counts and the cell selection are environment, not pipeline
// parameters). The digest is the FNV-1a hash of this text.
std::string config_canonical_text(const RunConfig& config);
std::string config_digest(const RunConfig& config);

// Flat key-value config file: one "key = value" per line, '#' comments.
// Unknown keys are rejected. Returns keys in file order for diagnostics.
void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);
RunConfig load_config_file(const std::filesystem::path& file, RunConfig base = {});

}  // namespace epiwave
