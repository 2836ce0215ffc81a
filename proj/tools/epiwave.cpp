// epiwave: EEG seizure-detection pipeline over the five-set Bonn corpus
// layout. Stages (decompose, features, train, evaluate) exchange artifacts
// through the output directory; `reproduce` runs the whole grid in one shot.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "epiwave/classifiers.hpp"
#include "epiwave/config.hpp"
#include "epiwave/dataset.hpp"
#include "epiwave/dwt.hpp"
#include "epiwave/errors.hpp"
#include "epiwave/eval.hpp"
#include "epiwave/features.hpp"
#include "epiwave/text_io.hpp"

namespace fs = std::filesystem;
using namespace epiwave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCellError = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBandFailure = 3;

struct CliSelection {
  std::vector<std::string> cases;  // empty = all six
  std::vector<std::uint64_t> seeds;
};

std::vector<std::string> selected_cases(const CliSelection& selection) {
  if (!selection.cases.empty()) return selection.cases;
  std::vector<std::string> all;
  for (const BinaryCase& c : binary_cases()) all.push_back(c.name);
  return all;
}

// "7", "1,2,3" or "1..10".
std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& part : split(spec, ',')) {
    const std::string_view t = trim(part);
    if (t.empty()) continue;
    const std::size_t dots = t.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(static_cast<std::uint64_t>(parse_int(t)));
      continue;
    }
    const std::uint64_t first = static_cast<std::uint64_t>(parse_int(t.substr(0, dots)));
    const std::uint64_t last = static_cast<std::uint64_t>(parse_int(t.substr(dots + 2)));
    if (last < first) throw InvalidArgument("seed range must ascend: " + std::string(t));
    for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw InvalidArgument("empty seed list: '" + spec + "'");
  return seeds;
}

std::string artifact_stamp(const RunConfig& config) {
  return "digest=" + config_digest(config) + " seed=" + std::to_string(config.seed);
}

// ---- verify-data ----

int cmd_verify_data(const RunConfig& config) {
  if (!fs::is_directory(config.data_dir)) {
    std::cerr << "directory not found: " << config.data_dir.string() << "\n";
    return kExitInputError;
  }

  int total_files = 0;
  bool all_valid = true;
  for (const SetDescriptor& descriptor : DatasetSpec::bonn().sets) {
    const SetAudit audit = audit_set(config.data_dir, descriptor.letter);
    total_files += audit.files_found;
    if (audit.problems.empty()) {
      std::cout << "set " << descriptor.letter << ": " << audit.files_found << " files OK\n";
    } else {
      all_valid = false;
      std::cout << "set " << descriptor.letter << ": " << audit.files_found << " files, "
                << audit.problems.size() << " problem(s)\n";
      for (const std::string& problem : audit.problems) {
        std::cout << "  " << problem << '\n';
      }
    }
  }
  if (all_valid) {
    std::cout << "5 sets, " << total_files << " files, OK\n";
    return kExitOk;
  }
  std::cout << "5 sets, " << total_files << " files, INVALID\n";
  return kExitInputError;
}

// ---- decompose ----

fs::path set_dir(const RunConfig& config, char letter) {
  return config.output_dir / "decompose" / std::string(1, letter);
}

void write_decomposition_csv(const fs::path& file, const WaveletDecomposition& dec,
                             const std::string& stamp) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "# " << stamp << " family=" << to_string(dec.family) << " levels=" << dec.levels
      << " n=" << dec.signal_length << '\n';
  for (const auto& [name, values] : dec.bands) {
    out << name;
    for (const double v : values) out << ',' << fmt_full(v);
    out << '\n';
  }
}

WaveletDecomposition load_decomposition_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  WaveletDecomposition dec;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '#') {
      for (const std::string& token : split(stripped.substr(1), ' ')) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "family") dec.family = wavelet_family_from_string(value);
        if (key == "levels") dec.levels = static_cast<int>(parse_int(value));
        if (key == "n") dec.signal_length = static_cast<std::size_t>(parse_int(value));
      }
      continue;
    }
    const auto cells = split(stripped, ',');
    std::vector<double> values(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) values[i - 1] = parse_double(cells[i]);
    dec.bands.emplace_back(cells[0], std::move(values));
  }
  if (dec.bands.empty()) throw IoError("no bands in " + file.string());
  return dec;
}

int cmd_decompose(const RunConfig& config, const CliSelection& selection) {
  if (!fs::is_directory(config.data_dir)) {
    std::cerr << "decompose: data directory not found: " << config.data_dir.string() << "\n";
    return kExitInputError;
  }

  std::set<char> letters;
  for (const std::string& name : selected_cases(selection)) {
    const BinaryCase& c = case_from_name(name);
    letters.insert(c.negative_set);
    letters.insert(c.positive_set);
  }

  const QuadFilterBank bank = build_filters(config.wavelet_family);
  const std::string stamp = artifact_stamp(config);
  for (const char letter : letters) {
    const std::vector<EegSegment> segments = load_set(config.data_dir, letter);
    const fs::path dir = set_dir(config, letter);
    fs::create_directories(dir);

    const char prefix = DatasetSpec::bonn().set(letter).file_prefix;
    for (const EegSegment& segment : segments) {
      const WaveletDecomposition dec = wavedec(segment.samples, bank, config.levels);
      char name[16];
      std::snprintf(name, sizeof(name), "%c%03d.csv", prefix, segment.file_index);
      write_decomposition_csv(dir / name, dec, stamp);
    }

    std::ofstream manifest(dir / "manifest.txt");
    manifest << "# " << stamp << '\n';
    manifest << "set " << letter << '\n';
    manifest << "segments " << segments.size() << '\n';
    manifest << "family " << to_string(config.wavelet_family) << '\n';
    manifest << "levels " << config.levels << '\n';
    std::cout << "decompose: set " << letter << " -> " << dir.string() << " (" << segments.size()
              << " segments)\n";
  }
  return kExitOk;
}

// ---- features ----

std::vector<WaveletDecomposition> load_set_decompositions(const RunConfig& config, char letter) {
  const fs::path dir = set_dir(config, letter);
  if (!fs::is_directory(dir)) {
    throw IoError("features: missing decompose artifact for set " + std::string(1, letter) +
                  " (" + dir.string() + ")");
  }
  const char prefix = DatasetSpec::bonn().set(letter).file_prefix;
  std::vector<WaveletDecomposition> decs;
  for (int i = 0; i < DatasetSpec::bonn().segments_per_set; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%c%03d.csv", prefix, i);
    const fs::path file = dir / name;
    if (!fs::exists(file)) throw IoError("features: missing decompose artifact " + file.string());
    WaveletDecomposition dec = load_decomposition_csv(file);
    if (dec.family != config.wavelet_family || dec.levels != config.levels) {
      throw IoError("features: stale decompose artifact " + file.string() +
                    " (family/levels differ from the current config)");
    }
    decs.push_back(std::move(dec));
  }
  return decs;
}

fs::path case_features_dir(const RunConfig& config, const std::string& case_name) {
  return config.output_dir / "features" / case_name;
}

void write_split_file(const fs::path& file, const SplitPlan& plan, const std::string& stamp) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "# " << stamp << '\n';
  out << "test_fraction " << fmt_full(plan.test_fraction) << '\n';
  auto write_indices = [&out](const char* key, const std::vector<int>& indices) {
    out << key;
    for (const int i : indices) out << ' ' << i;
    out << '\n';
  };
  write_indices("train", plan.train_indices);
  write_indices("test", plan.test_indices);
}

std::vector<int> read_index_line(const std::string& line) {
  std::vector<int> out;
  for (const std::string& token : split(line, ' ')) {
    const std::string_view t = trim(token);
    if (t.empty()) continue;
    out.push_back(static_cast<int>(parse_int(t)));
  }
  return out;
}

std::pair<std::vector<int>, std::vector<int>> load_split_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  std::vector<int> train, test;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (stripped.starts_with("train ")) train = read_index_line(std::string(stripped.substr(6)));
    if (stripped.starts_with("test ")) test = read_index_line(std::string(stripped.substr(5)));
  }
  if (train.empty() || test.empty()) throw IoError("incomplete split file " + file.string());
  return {train, test};
}

int cmd_features(const RunConfig& config, const CliSelection& selection) {
  const std::string stamp = artifact_stamp(config);
  for (const std::string& case_name : selected_cases(selection)) {
    const BinaryCase& binary = case_from_name(case_name);

    std::vector<WaveletDecomposition> pool_decs =
        load_set_decompositions(config, binary.negative_set);
    std::vector<WaveletDecomposition> positive =
        load_set_decompositions(config, binary.positive_set);
    std::vector<int> labels(pool_decs.size(), 0);
    for (auto& dec : positive) {
      pool_decs.push_back(std::move(dec));
      labels.push_back(1);
    }

    const BandMatrixSet pool = assemble_band_matrices(pool_decs, labels);
    LabeledPool shallow;  // stratified_split only needs labels
    shallow.case_name = case_name;
    shallow.labels = labels;
    shallow.segments.resize(labels.size());
    const SplitPlan plan = stratified_split(shallow, config.seed, config.test_fraction);

    const BandMatrixSet train_bands = slice_rows(pool, plan.train_indices);
    const BandMatrixSet test_bands = slice_rows(pool, plan.test_indices);

    const fs::path dir = case_features_dir(config, case_name);
    fs::create_directories(dir);

    FeatureMatrix train, test;
    if (config.extractor == ExtractorId::PcaMaxFusion) {
      PcaMaxOptions options;
      options.k = config.pca_k;
      options.allow_rank_truncation = config.allow_rank_truncation;
      options.zscore_before_pca = config.zscore_before_pca;
      options.fit_on_all = config.paper_mode_fit_on_all;
      options.bands = config.fuse_bands;
      PcaMaxResult result = extract_pca_max_features(train_bands, test_bands, options);
      train = std::move(result.train);
      test = std::move(result.test);
      for (std::size_t b = 0; b < result.models.size(); ++b) {
        save_pca_model(dir / ("pca_" + result.bands_used[b] + ".txt"), result.models[b]);
      }
    } else {
      train = extract_stats_features(train_bands);
      test = extract_stats_features(test_bands);
    }

    write_feature_csv(dir / "train.csv", train, stamp);
    write_feature_csv(dir / "test.csv", test, stamp);
    write_split_file(dir / "split.txt", plan, stamp);
    std::cout << "features: " << case_name << " -> " << dir.string() << " (train "
              << train.values.rows() << 'x' << train.values.cols() << ", test "
              << test.values.rows() << 'x' << test.values.cols() << ")\n";
  }
  return kExitOk;
}

// ---- train ----

fs::path model_file(const RunConfig& config, const std::string& case_name,
                    const std::string& classifier) {
  return config.output_dir / "models" / case_name / (classifier + ".model");
}

int cmd_train(const RunConfig& config, const CliSelection& selection) {
  for (const std::string& case_name : selected_cases(selection)) {
    const fs::path features = case_features_dir(config, case_name) / "train.csv";
    if (!fs::exists(features)) {
      throw IoError("train: missing features artifact " + features.string());
    }
    const FeatureMatrix train = load_feature_csv(features);

    for (const std::string& classifier : config.classifiers) {
      const ModelBundle bundle = fit_bundle(classifier, train.values, train.labels,
                                            config.standardize, config.knn_k, config.svm_c);
      const fs::path file = model_file(config, case_name, classifier);
      fs::create_directories(file.parent_path());
      save_model_bundle(file, bundle);
      std::cout << "train: " << case_name << '/' << classifier << " -> " << file.string() << '\n';
    }
  }
  return kExitOk;
}

// ---- evaluate ----

int cmd_evaluate(const RunConfig& config, const CliSelection& selection) {
  const fs::path report_dir = config.output_dir / "reports";
  fs::create_directories(report_dir);

  for (const std::string& case_name : selected_cases(selection)) {
    const fs::path dir = case_features_dir(config, case_name);
    const fs::path test_file = dir / "test.csv";
    const fs::path split_file = dir / "split.txt";
    if (!fs::exists(test_file) || !fs::exists(split_file)) {
      throw IoError("evaluate: missing features artifact under " + dir.string());
    }
    const FeatureMatrix test = load_feature_csv(test_file);
    const auto [train_idx, test_idx] = load_split_file(split_file);

    for (const std::string& classifier : config.classifiers) {
      const fs::path bundle_file = model_file(config, case_name, classifier);
      if (!fs::exists(bundle_file)) {
        throw IoError("evaluate: missing model artifact " + bundle_file.string());
      }
      const ModelBundle bundle = load_model_bundle(bundle_file);

      EvaluationReport report;
      report.case_name = case_name;
      report.classifier_id = classifier;
      report.extractor = config.extractor;
      report.config_digest = config_digest(config);
      report.seed = config.seed;
      report.test_indices = test_idx;
      report.y_true = test.labels;
      report.y_pred = bundle_predict(bundle, test.values);
      report.cm = confusion(report.y_true, report.y_pred);
      report.metrics = metrics(report.cm);

      write_report_csv(report_dir / (case_name + "_" + classifier + ".csv"), report);
      write_predictions_csv(report_dir / (case_name + "_" + classifier + "_predictions.csv"),
                            report);
      std::cout << report_csv_row(report) << '\n';
    }
  }
  return kExitOk;
}

// ---- reproduce ----

int cmd_reproduce(const RunConfig& config, const CliSelection& selection,
                  const std::vector<std::string>& classifiers) {
  if (!fs::is_directory(config.data_dir)) {
    std::cerr << "reproduce: data directory not found: " << config.data_dir.string() << "\n";
    return kExitInputError;
  }
  fs::create_directories(config.output_dir);

  GridOptions options;
  options.cases = selection.cases;
  options.classifiers = classifiers;
  options.seeds = selection.seeds;
  const GridResult grid = reproduce_all(config, options);

  write_grid_csv(config.output_dir / "grid.csv", grid);
  const std::string tables = format_grid_tables(grid);
  {
    std::ofstream out(config.output_dir / "grid_tables.txt");
    out << "# digest=" << grid.config_digest << '\n' << tables;
  }
  std::cout << tables;

  bool any_error = false;
  for (const GridCell& cell : grid.cells) {
    if (!cell.ok) {
      any_error = true;
      std::cerr << "cell " << cell.case_name << '/' << cell.classifier_id
                << " failed: " << cell.error << '\n';
    }
  }
  if (any_error) return kExitCellError;

  const std::vector<BandCheck> checks = check_reference_bands(grid);
  std::cout << format_band_summary(checks);
  const bool all_bands = std::all_of(checks.begin(), checks.end(),
                                     [](const BandCheck& c) { return c.passed; });
  return all_bands ? kExitOk : kExitBandFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG seizure-detection pipeline (DWT + per-band PCA with max fusion + "
               "KNN/SVM/NB) over the five-set Bonn corpus layout"};
  app.require_subcommand(1);

  RunConfig config;
  CliSelection selection;
  std::string config_file;
  std::string family_name, extractor_name, band_single, seed_spec;
  std::string fuse_bands_csv, classifiers_csv;
  std::string data_dir, output_dir;

  app.add_option("--config", config_file, "flat key=value config file");
  app.add_option("--data-dir", data_dir,
                 "corpus directory (falls back to $EPIWAVE_DATA_DIR)");
  app.add_option("--output-dir", output_dir, "artifact directory (default epiwave-out)");
  auto* family_opt = app.add_option("--wavelet-family", family_name, "haar|db2|db4");
  auto* levels_opt = app.add_option("--levels", config.levels, "decomposition depth");
  auto* pca_k_opt = app.add_option("--pca-k", config.pca_k, "principal components per band");
  auto* extractor_opt = app.add_option("--extractor", extractor_name, "pca_max_fusion|stats7");
  auto* classifiers_opt =
      app.add_option("--classifiers", classifiers_csv, "comma list of knn,svm,nb");
  auto* knn_k_opt = app.add_option("--knn-k", config.knn_k, "neighbour count (odd)");
  auto* svm_c_opt = app.add_option("--svm-c", config.svm_c, "soft-margin penalty");
  auto* seed_opt = app.add_option("--seed", config.seed, "split seed");
  auto* fraction_opt = app.add_option("--test-fraction", config.test_fraction, "hold-out share");
  auto* standardize_opt =
      app.add_flag("--standardize,!--no-standardize", config.standardize,
                   "z-score features for knn/svm (default on)");
  auto* fuse_opt = app.add_option("--fuse-bands", fuse_bands_csv,
                                  "band subset for the max fusion, e.g. A5,D5,D4");
  auto* band_opt = app.add_option("--band", band_single, "single-band mode (shorthand)");
  auto* zscore_opt = app.add_flag("--zscore-before-pca", config.zscore_before_pca,
                                  "standardize band columns before PCA");
  auto* fit_all_opt = app.add_flag("--paper-mode-fit-on-all", config.paper_mode_fit_on_all,
                                   "fit PCA on train+test rows (leakage probe)");
  auto* clamp_opt = app.add_flag("--allow-rank-truncation", config.allow_rank_truncation,
                                 "clamp pca-k to the feasible rank instead of failing");
  auto* jobs_opt = app.add_option("--jobs", config.jobs, "parallel case workers (reproduce)");
  app.add_option("--cases", selection.cases, "case subset, e.g. A-E B-E")
      ->delimiter(',');
  auto* seeds_opt = app.add_option("--seeds", seed_spec, "seed list/range, e.g. 1..10");

  // Pipeline flags may appear after the subcommand name.
  app.add_subcommand("verify-data", "audit per-set file and line counts")->fallthrough();
  app.add_subcommand("decompose", "write per-segment band CSV artifacts")->fallthrough();
  app.add_subcommand("features", "split and extract feature CSV artifacts")->fallthrough();
  app.add_subcommand("train", "fit classifier model bundles")->fallthrough();
  app.add_subcommand("evaluate", "score model bundles on the held-out rows")->fallthrough();
  app.add_subcommand("reproduce", "run the full (case x classifier) grid")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    // Precedence: defaults, then config file, then explicit flags.
    if (!config_file.empty()) {
      const RunConfig flag_snapshot = config;
      config = load_config_file(config_file, RunConfig{});
      // Re-apply only the flags the user passed.
      if (levels_opt->count()) config.levels = flag_snapshot.levels;
      if (pca_k_opt->count()) config.pca_k = flag_snapshot.pca_k;
      if (knn_k_opt->count()) config.knn_k = flag_snapshot.knn_k;
      if (svm_c_opt->count()) config.svm_c = flag_snapshot.svm_c;
      if (seed_opt->count()) config.seed = flag_snapshot.seed;
      if (fraction_opt->count()) config.test_fraction = flag_snapshot.test_fraction;
      if (standardize_opt->count()) config.standardize = flag_snapshot.standardize;
      if (zscore_opt->count()) config.zscore_before_pca = flag_snapshot.zscore_before_pca;
      if (fit_all_opt->count()) config.paper_mode_fit_on_all = flag_snapshot.paper_mode_fit_on_all;
      if (clamp_opt->count()) config.allow_rank_truncation = flag_snapshot.allow_rank_truncation;
      if (jobs_opt->count()) config.jobs = flag_snapshot.jobs;
    }
    if (!data_dir.empty()) config.data_dir = data_dir;
    if (config.data_dir.empty()) {
      if (const char* env = std::getenv("EPIWAVE_DATA_DIR")) config.data_dir = env;
    }
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (family_opt->count()) config.wavelet_family = wavelet_family_from_string(family_name);
    if (extractor_opt->count()) config.extractor = extractor_from_string(extractor_name);
    if (classifiers_opt->count()) {
      config.classifiers.clear();
      for (const std::string& c : split(classifiers_csv, ',')) {
        if (!trim(c).empty()) config.classifiers.emplace_back(trim(c));
      }
    }
    if (fuse_opt->count()) {
      config.fuse_bands.clear();
      for (const std::string& b : split(fuse_bands_csv, ',')) {
        if (!trim(b).empty()) config.fuse_bands.emplace_back(trim(b));
      }
    }
    if (band_opt->count()) config.fuse_bands = {band_single};
    if (seeds_opt->count()) selection.seeds = parse_seed_spec(seed_spec);

    for (const std::string& case_name : selection.cases) {
      case_from_name(case_name);  // fail fast on typos
    }

    if (app.got_subcommand("verify-data")) return cmd_verify_data(config);
    if (app.got_subcommand("decompose")) return cmd_decompose(config, selection);
    if (app.got_subcommand("features")) return cmd_features(config, selection);
    if (app.got_subcommand("train")) return cmd_train(config, selection);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(config, selection);
    if (app.got_subcommand("reproduce")) {
      return cmd_reproduce(config, selection, config.classifiers);
    }
    std::cerr << "no subcommand\n";
    return kExitInputError;
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kExitInputError;
  } catch (const MissingFile& e) {
    std::cerr << e.what() << '\n';
    return kExitInputError;
  } catch (const UnknownCase& e) {
    std::cerr << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitCellError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return kExitCellError;
  }
}
