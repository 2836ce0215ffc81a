#include "epiwave/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "epiwave/errors.hpp"
#include "epiwave/text_io.hpp"

namespace epiwave {

namespace {

std::string segment_file_name(char prefix, int number) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%03d.txt", prefix, number);
  return buf;
}

// The corpus ships with either 000..099 or 001..100 numbering; detect which
// convention a directory uses by probing the two possible first files.
int first_file_number(const std::filesystem::path& dir, char prefix) {
  if (std::filesystem::exists(dir / segment_file_name(prefix, 0))) return 0;
  return 1;
}

// Parses a sample line as an integer ADC code; the value is stored as a real.
double parse_sample_line(const std::string& raw, const std::string& file_name,
                         std::size_t line_no) {
  try {
    return static_cast<double>(parse_int(raw));
  } catch (const InvalidArgument&) {
    throw ParseError(file_name, line_no);
  }
}

// Seeded Fisher-Yates. Hand-rolled index draw keeps the plan identical
// across standard libraries (uniform_int_distribution is not portable).
void shuffle_indices(std::vector<int>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace

const DatasetSpec& DatasetSpec::bonn() {
  static const DatasetSpec spec{
      173.61,
      23.6,
      4097,
      100,
      {{{'A', 'Z', "healthy, eyes open (surface)"},
        {'B', 'O', "healthy, eyes closed (surface)"},
        {'C', 'N', "epileptic, seizure-free, opposite hemisphere (intracranial)"},
        {'D', 'F', "epileptic, seizure-free, epileptogenic zone (intracranial)"},
        {'E', 'S', "seizure activity (intracranial)"}}}};
  return spec;
}

const SetDescriptor& DatasetSpec::set(char letter) const {
  for (const auto& s : sets) {
    if (s.letter == letter) return s;
  }
  throw InvalidArgument(std::string("unknown set letter: ") + letter);
}

const std::array<BinaryCase, 6>& binary_cases() {
  static const std::array<BinaryCase, 6> cases{{{"A-C", 'A', 'C'},
                                                {"A-D", 'A', 'D'},
                                                {"A-E", 'A', 'E'},
                                                {"B-C", 'B', 'C'},
                                                {"B-D", 'B', 'D'},
                                                {"B-E", 'B', 'E'}}};
  return cases;
}

const BinaryCase& case_from_name(std::string_view name) {
  for (const auto& c : binary_cases()) {
    if (c.name == name) return c;
  }
  throw UnknownCase(std::string(name));
}

EegSegment parse_segment_file(const std::filesystem::path& file, char set_letter, int file_index,
                              int samples_per_segment) {
  const std::string file_name = file.filename().string();
  std::ifstream in(file);
  if (!in) throw MissingFile(file_name);

  EegSegment segment;
  segment.set_letter = set_letter;
  segment.file_index = file_index;
  segment.samples.reserve(static_cast<std::size_t>(samples_per_segment));

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view stripped = trim(line);
    if (stripped.empty()) {
      // A trailing newline produces one empty final read; anything else is
      // a malformed file.
      if (in.eof() || in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(file_name, line_no);
    }
    segment.samples.push_back(parse_sample_line(std::string(stripped), file_name, line_no));
  }

  if (segment.samples.size() != static_cast<std::size_t>(samples_per_segment)) {
    throw MalformedSegment(file_name, segment.samples.size(),
                           static_cast<std::size_t>(samples_per_segment));
  }
  return segment;
}

std::vector<EegSegment> load_set(const std::filesystem::path& directory, char set_letter,
                                 const DatasetSpec& spec) {
  if (!std::filesystem::is_directory(directory)) {
    throw IoError("directory not found: " + directory.string());
  }
  const SetDescriptor& descriptor = spec.set(set_letter);
  const int base = first_file_number(directory, descriptor.file_prefix);

  std::vector<EegSegment> segments;
  segments.reserve(static_cast<std::size_t>(spec.segments_per_set));
  for (int i = 0; i < spec.segments_per_set; ++i) {
    const std::string name = segment_file_name(descriptor.file_prefix, base + i);
    const std::filesystem::path file = directory / name;
    if (!std::filesystem::exists(file)) throw MissingFile(name);
    segments.push_back(parse_segment_file(file, set_letter, i, spec.samples_per_segment));
  }
  return segments;
}

void write_segment(const std::filesystem::path& file, const EegSegment& segment) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  for (const double v : segment.samples) {
    out << static_cast<long long>(std::llround(v)) << '\n';
  }
}

LabeledPool make_case(const std::map<char, std::vector<EegSegment>>& segments_by_set,
                      std::string_view case_name) {
  const BinaryCase& c = case_from_name(case_name);
  const auto negatives = segments_by_set.find(c.negative_set);
  const auto positives = segments_by_set.find(c.positive_set);
  if (negatives == segments_by_set.end() || positives == segments_by_set.end()) {
    throw InvalidArgument("case " + c.name + " requires sets " + c.negative_set + " and " +
                          c.positive_set + " to be loaded");
  }

  LabeledPool pool;
  pool.case_name = c.name;
  pool.segments.reserve(negatives->second.size() + positives->second.size());
  for (const auto& s : negatives->second) {
    pool.segments.push_back(s);
    pool.labels.push_back(0);
  }
  for (const auto& s : positives->second) {
    pool.segments.push_back(s);
    pool.labels.push_back(1);
  }
  return pool;
}

SplitPlan stratified_split(const LabeledPool& pool, std::uint64_t seed, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must lie in (0,1), got " + fmt_full(test_fraction));
  }

  std::vector<int> class_indices[2];
  for (std::size_t i = 0; i < pool.labels.size(); ++i) {
    const int label = pool.labels[i];
    if (label != 0 && label != 1) throw LabelError("pool label must be 0 or 1");
    class_indices[label].push_back(static_cast<int>(i));
  }
  if (class_indices[0].empty() || class_indices[1].empty()) {
    throw DegenerateSplit("pool must contain both classes");
  }

  SplitPlan plan;
  plan.seed = seed;
  plan.test_fraction = test_fraction;
  plan.labels = pool.labels;

  std::mt19937_64 rng(seed);
  for (int label = 0; label < 2; ++label) {
    std::vector<int>& indices = class_indices[label];
    // round-half-to-even: a 0.5-item share rounds down to an empty test set.
    const std::size_t n_test = static_cast<std::size_t>(
        std::nearbyint(test_fraction * static_cast<double>(indices.size())));
    if (n_test == 0 || n_test >= indices.size()) {
      throw DegenerateSplit("class " + std::to_string(label) + " would get " +
                            std::to_string(n_test) + " of " + std::to_string(indices.size()) +
                            " items as test data");
    }
    shuffle_indices(indices, rng);
    plan.test_indices.insert(plan.test_indices.end(), indices.begin(),
                             indices.begin() + static_cast<std::ptrdiff_t>(n_test));
    plan.train_indices.insert(plan.train_indices.end(),
                              indices.begin() + static_cast<std::ptrdiff_t>(n_test), indices.end());
  }
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  return plan;
}

SetAudit audit_set(const std::filesystem::path& directory, char set_letter,
                   const DatasetSpec& spec) {
  SetAudit audit;
  audit.set_letter = set_letter;
  if (!std::filesystem::is_directory(directory)) {
    audit.problems.push_back("directory not found: " + directory.string());
    return audit;
  }

  const SetDescriptor& descriptor = spec.set(set_letter);
  const int base = first_file_number(directory, descriptor.file_prefix);
  for (int i = 0; i < spec.segments_per_set; ++i) {
    const std::string name = segment_file_name(descriptor.file_prefix, base + i);
    const std::filesystem::path file = directory / name;
    if (!std::filesystem::exists(file)) {
      audit.problems.push_back(name + ": missing");
      continue;
    }
    ++audit.files_found;
    try {
      parse_segment_file(file, set_letter, i, spec.samples_per_segment);
    } catch (const MalformedSegment& e) {
      audit.problems.push_back(name + ": " + std::to_string(e.got) + " samples, want " +
                               std::to_string(e.want));
    } catch (const ParseError& e) {
      audit.problems.push_back(name + ": unparseable line " + std::to_string(e.line_no));
    } catch (const Error& e) {
      audit.problems.push_back(name + ": " + e.what());
    }
  }
  return audit;
}

}  // namespace epiwave
