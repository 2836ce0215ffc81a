#include "epiwave/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "epiwave/errors.hpp"
#include "epiwave/text_io.hpp"

namespace epiwave {

namespace {

std::string join(const std::vector<std::string>& values, char delim) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += delim;
    out += values[i];
  }
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw InvalidArgument("not a boolean: '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& item : split(value, ',')) {
    const std::string_view t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

std::string config_canonical_text(const RunConfig& config) {
  // std::map keeps the keys sorted, which makes the digest independent of
  // the order keys were assigned in.
  std::map<std::string, std::string> kv;
  kv["allow_rank_truncation"] = config.allow_rank_truncation ? "true" : "false";
  kv["extractor"] = to_string(config.extractor);
  kv["fuse_bands"] = config.fuse_bands.empty() ? "all" : join(config.fuse_bands, ',');
  kv["knn_k"] = std::to_string(config.knn_k);
  kv["levels"] = std::to_string(config.levels);
  kv["paper_mode_fit_on_all"] = config.paper_mode_fit_on_all ? "true" : "false";
  kv["pca_k"] = std::to_string(config.pca_k);
  kv["seed"] = std::to_string(config.seed);
  kv["standardize"] = config.standardize ? "true" : "false";
  kv["svm_c"] = fmt_full(config.svm_c);
  kv["test_fraction"] = fmt_full(config.test_fraction);
  kv["wavelet_family"] = to_string(config.wavelet_family);
  kv["zscore_before_pca"] = config.zscore_before_pca ? "true" : "false";

  std::string text;
  for (const auto& [key, value] : kv) {
    text += key;
    text += '=';
    text += value;
    text += '\n';
  }
  return text;
}

std::string config_digest(const RunConfig& config) {
  return fnv1a_hex(config_canonical_text(config));
}

void apply_config_line(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "data_dir") {
    config.data_dir = value;
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "wavelet_family") {
    config.wavelet_family = wavelet_family_from_string(value);
  } else if (key == "levels") {
    config.levels = static_cast<int>(parse_int(value));
  } else if (key == "pca_k") {
    config.pca_k = static_cast<int>(parse_int(value));
  } else if (key == "extractor") {
    config.extractor = extractor_from_string(value);
  } else if (key == "classifiers") {
    config.classifiers = parse_list(value);
  } else if (key == "knn_k") {
    config.knn_k = static_cast<int>(parse_int(value));
  } else if (key == "svm_c") {
    config.svm_c = parse_double(value);
  } else if (key == "seed") {
    config.seed = static_cast<std::uint64_t>(parse_int(value));
  } else if (key == "test_fraction") {
    config.test_fraction = parse_double(value);
  } else if (key == "standardize") {
    config.standardize = parse_bool(value);
  } else if (key == "fuse_bands") {
    config.fuse_bands = value == "all" ? std::vector<std::string>{} : parse_list(value);
  } else if (key == "zscore_before_pca") {
    config.zscore_before_pca = parse_bool(value);
  } else if (key == "paper_mode_fit_on_all") {
    config.paper_mode_fit_on_all = parse_bool(value);
  } else if (key == "allow_rank_truncation") {
    config.allow_rank_truncation = parse_bool(value);
  } else if (key == "jobs") {
    config.jobs = static_cast<int>(parse_int(value));
  } else {
    throw InvalidArgument("unknown config key: '" + key + "'");
  }
}

RunConfig load_config_file(const std::filesystem::path& file, RunConfig base) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config file " + file.string());

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key{trim(stripped.substr(0, eq))};
    const std::string value{trim(stripped.substr(eq + 1))};
    apply_config_line(base, key, value);
  }
  return base;
}

}  // namespace epiwave
