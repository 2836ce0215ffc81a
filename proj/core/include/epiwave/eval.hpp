#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "epiwave/config.hpp"
#include "epiwave/features.hpp"

namespace epiwave {

// Positive class = epileptic condition (label 1).
struct ConfusionMatrix {
  long long tp = 0;
  long long fn = 0;
  long long tn = 0;
  long long fp = 0;

  long long total() const { return tp + fn + tn + fp; }
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// accuracy/sensitivity/specificity/precision/recall are percentages,
// f_measure lives on [0,1]. Ratios with a zero denominator are defined as 0
// and named in zero_division_flags.
struct MetricSet {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::vector<std::string> zero_division_flags;
};

MetricSet metrics(const ConfusionMatrix& cm);

struct EvaluationReport {
  std::string case_name;
  std::string classifier_id;
  ExtractorId extractor = ExtractorId::PcaMaxFusion;
  std::string config_digest;
  std::uint64_t seed = 0;
  ConfusionMatrix cm;
  MetricSet metrics;
  std::vector<int> test_indices;
  std::vector<int> y_true;
  std::vector<int> y_pred;
  std::vector<std::string> notes;  // rank clamps, degenerate ratios
  double wall_seconds = 0.0;
};

// Full single-cell pipeline: load, split, decompose, extract, fit, predict,
// score. All fitting is confined to training rows.
EvaluationReport run_experiment(const std::string& case_name, const std::string& classifier_id,
                                ExtractorId extractor, const RunConfig& config);

// Scores one already extracted cell; the staged CLI path reuses this so the
// staged and single-shot routes share every numeric step.
EvaluationReport evaluate_extracted(const std::string& case_name, const std::string& classifier_id,
                                    const FeatureMatrix& train, const FeatureMatrix& test,
                                    const std::vector<int>& test_indices, const RunConfig& config);

struct GridOptions {
  std::vector<std::string> cases;        // default: the six binary cases
  std::vector<std::string> classifiers;  // default: config.classifiers
  std::vector<std::uint64_t> seeds;      // default: {config.seed}
};

struct GridCell {
  std::string case_name;
  std::string classifier_id;
  bool ok = false;
  std::string error;  // failed cells are recorded, the grid keeps running
  std::vector<EvaluationReport> per_seed;

  double mean_accuracy() const;
  double stddev_accuracy() const;
};

struct GridResult {
  std::vector<GridCell> cells;  // case-major, classifier-minor order
  std::string config_digest;
  std::vector<std::uint64_t> seeds;
};

// Runs the (case x classifier) grid, sharing decompositions per case and
// parallelizing across cases with config.jobs workers.
GridResult reproduce_all(const RunConfig& config, const GridOptions& options = {});

// Published reference accuracies for the six cases (percent), used as soft
// reproduction bands: the separable cases (A-E, B-E) must reach at least
// 97.5, the rest must land within +/- 7.5 points of the reference.
double reference_accuracy(const std::string& classifier_id, const std::string& case_name);

struct BandCheck {
  std::string case_name;
  std::string classifier_id;
  double mean_accuracy = 0.0;
  double reference = 0.0;
  bool separable = false;
  bool passed = false;
};

std::vector<BandCheck> check_reference_bands(const GridResult& grid);

// ---- report formatting ----

std::string report_csv_header();
std::string report_csv_row(const EvaluationReport& report);
void write_report_csv(const std::filesystem::path& file, const EvaluationReport& report);
void write_predictions_csv(const std::filesystem::path& file, const EvaluationReport& report);
void write_grid_csv(const std::filesystem::path& file, const GridResult& grid);

// One aligned table per classifier, mirroring the published layout; cells
// show mean +/- std when more than one seed ran.
std::string format_grid_tables(const GridResult& grid);
std::string format_band_summary(const std::vector<BandCheck>& checks);

}  // namespace epiwave
