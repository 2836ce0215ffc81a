#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace epiwave {

struct SetDescriptor {
  char letter;        // A..E
  char file_prefix;   // Z,O,N,F,S
  std::string condition;
};

// Catalog of the five-set corpus: 100 single-channel segments per set,
// 4097 samples each at 173.61 Hz (23.6 s).
struct DatasetSpec {
  double sample_rate_hz = 173.61;
  double duration_s = 23.6;
  int samples_per_segment = 4097;
  int segments_per_set = 100;
  std::array<SetDescriptor, 5> sets;

  static const DatasetSpec& bonn();
  const SetDescriptor& set(char letter) const;  // throws InvalidArgument
};

struct EegSegment {
  char set_letter = '?';
  int file_index = 0;  // 0-based
  std::vector<double> samples;
};

// One of the six binary classification cases. Label 0 is the surface set
// (A or B), label 1 the epileptic-condition set (C, D or E).
struct BinaryCase {
  std::string name;   // "<negative>-<positive>", e.g. "A-E"
  char negative_set;
  char positive_set;
};

const std::array<BinaryCase, 6>& binary_cases();
const BinaryCase& case_from_name(std::string_view name);  // throws UnknownCase

struct LabeledPool {
  std::string case_name;
  std::vector<EegSegment> segments;  // negative set first, then positive
  std::vector<int> labels;           // 0/1, aligned with segments
};

// Reads the 100 segments of one set, sorted by file index. File numbering
// 000..099 and 001..100 are both accepted and normalized to 0-based.
std::vector<EegSegment> load_set(const std::filesystem::path& directory, char set_letter,
                                 const DatasetSpec& spec = DatasetSpec::bonn());

// Parses one segment file (one ASCII integer per line).
EegSegment parse_segment_file(const std::filesystem::path& file, char set_letter, int file_index,
                              int samples_per_segment);

// Writes a segment back to the on-disk text format (round-trip safe).
void write_segment(const std::filesystem::path& file, const EegSegment& segment);

LabeledPool make_case(const std::map<char, std::vector<EegSegment>>& segments_by_set,
                      std::string_view case_name);

struct SplitPlan {
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
  std::vector<int> train_indices;  // ascending
  std::vector<int> test_indices;   // ascending
  std::vector<int> labels;         // per pool index
};

// Deterministic stratified hold-out: each class contributes
// round(test_fraction * class_count) test items.
SplitPlan stratified_split(const LabeledPool& pool, std::uint64_t seed, double test_fraction);

// verify-data support: audits one set directory without aborting on the
// first problem.
struct SetAudit {
  char set_letter = '?';
  int files_found = 0;
  std::vector<std::string> problems;  // empty means the set is valid
};

SetAudit audit_set(const std::filesystem::path& directory, char set_letter,
                   const DatasetSpec& spec = DatasetSpec::bonn());

}  // namespace epiwave
