#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "epiwave/dataset.hpp"
#include "epiwave/errors.hpp"
#include "synthetic.hpp"

using namespace epiwave;
using testsupport::TempDir;

namespace {

// Cheap deterministic set files: value = base + (file * 7 + line) % 101 - 50.
void write_fake_set(const std::filesystem::path& dir, char prefix, int first_number,
                    int files = 100, int lines = 4097, int base = 0) {
  std::filesystem::create_directories(dir);
  for (int f = 0; f < files; ++f) {
    char name[16];
    std::snprintf(name, sizeof(name), "%c%03d.txt", prefix, first_number + f);
    std::ofstream out(dir / name);
    for (int l = 0; l < lines; ++l) {
      out << base + (f * 7 + l) % 101 - 50 << '\n';
    }
  }
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("catalog constants") {
  const DatasetSpec& spec = DatasetSpec::bonn();
  CHECK(spec.samples_per_segment == 4097);
  CHECK(spec.samples_per_segment ==
        static_cast<int>(spec.sample_rate_hz * spec.duration_s));  // floor(173.61 * 23.6)
  CHECK(spec.segments_per_set == 100);
  REQUIRE(spec.sets.size() == 5);
  CHECK(spec.set('A').file_prefix == 'Z');
  CHECK(spec.set('B').file_prefix == 'O');
  CHECK(spec.set('C').file_prefix == 'N');
  CHECK(spec.set('D').file_prefix == 'F');
  CHECK(spec.set('E').file_prefix == 'S');
}

TEST_CASE("load_set reads 100 sorted segments") {
  TempDir tmp("epiwave-dataset");
  write_fake_set(tmp.path(), 'Z', 0);

  const std::vector<EegSegment> segments = load_set(tmp.path(), 'A');
  REQUIRE(segments.size() == 100);
  for (int i = 0; i < 100; ++i) {
    CHECK(segments[static_cast<std::size_t>(i)].set_letter == 'A');
    CHECK(segments[static_cast<std::size_t>(i)].file_index == i);
    CHECK(segments[static_cast<std::size_t>(i)].samples.size() == 4097);
  }
  // Spot value: file 3, line 5 -> (3*7+5) % 101 - 50 = -24.
  CHECK(segments[3].samples[5] == -24.0);
}

TEST_CASE("load_set accepts the 001..100 numbering convention") {
  TempDir tmp("epiwave-dataset");
  write_fake_set(tmp.path(), 'Z', 1);
  const std::vector<EegSegment> segments = load_set(tmp.path(), 'A');
  REQUIRE(segments.size() == 100);
  CHECK(segments.front().file_index == 0);  // normalized to 0-based
}

TEST_CASE("load_set error paths") {
  TempDir tmp("epiwave-dataset");
  write_fake_set(tmp.path(), 'Z', 0);

  SUBCASE("missing file") {
    std::filesystem::remove(tmp.path() / "Z042.txt");
    CHECK_THROWS_AS(load_set(tmp.path(), 'A'), MissingFile);
  }
  SUBCASE("wrong line count") {
    std::ofstream out(tmp.path() / "Z007.txt");
    for (int l = 0; l < 4096; ++l) out << "1\n";
    out.close();
    try {
      load_set(tmp.path(), 'A');
      FAIL("expected MalformedSegment");
    } catch (const MalformedSegment& e) {
      CHECK(e.got == 4096);
      CHECK(e.want == 4097);
      CHECK(e.name == "Z007.txt");
    }
  }
  SUBCASE("non-integer line") {
    std::ofstream out(tmp.path() / "Z007.txt");
    out << "12\nabc\n";
    for (int l = 0; l < 4095; ++l) out << "1\n";
    out.close();
    try {
      load_set(tmp.path(), 'A');
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_no == 2);
    }
  }
  SUBCASE("missing directory") {
    CHECK_THROWS_AS(load_set(tmp.path() / "nowhere", 'A'), IoError);
  }
}

TEST_CASE("all-zero file parses to an all-zero segment") {
  TempDir tmp("epiwave-dataset");
  std::filesystem::create_directories(tmp.path());
  std::ofstream out(tmp.path() / "Z000.txt");
  for (int l = 0; l < 4097; ++l) out << "0\n";
  out.close();

  const EegSegment segment = parse_segment_file(tmp.path() / "Z000.txt", 'A', 0, 4097);
  for (const double v : segment.samples) CHECK(v == 0.0);
}

TEST_CASE("segments survive a write/parse round trip") {
  TempDir tmp("epiwave-dataset");
  std::filesystem::create_directories(tmp.path());
  EegSegment segment;
  segment.set_letter = 'C';
  segment.file_index = 12;
  for (int i = 0; i < 4097; ++i) {
    segment.samples.push_back(static_cast<double>((i * 131) % 4001 - 2000));
  }
  write_segment(tmp.path() / "N012.txt", segment);
  const EegSegment back = parse_segment_file(tmp.path() / "N012.txt", 'C', 12, 4097);
  CHECK(back.samples == segment.samples);
}

TEST_CASE("make_case concatenates negative then positive") {
  TempDir tmp("epiwave-dataset");
  write_fake_set(tmp.path(), 'O', 0, 100, 4097, 10);
  write_fake_set(tmp.path(), 'F', 0, 100, 4097, 500);

  std::map<char, std::vector<EegSegment>> by_set;
  by_set['B'] = load_set(tmp.path(), 'B');
  by_set['D'] = load_set(tmp.path(), 'D');

  const LabeledPool pool = make_case(by_set, "B-D");
  REQUIRE(pool.segments.size() == 200);
  REQUIRE(pool.labels.size() == 200);
  for (int i = 0; i < 100; ++i) CHECK(pool.labels[static_cast<std::size_t>(i)] == 0);
  for (int i = 100; i < 200; ++i) CHECK(pool.labels[static_cast<std::size_t>(i)] == 1);
  // First element is O000, element 100 is F000.
  CHECK(pool.segments[0].set_letter == 'B');
  CHECK(pool.segments[0].file_index == 0);
  CHECK(pool.segments[100].set_letter == 'D');
  CHECK(pool.segments[100].file_index == 0);
}

TEST_CASE("make_case rejects unknown case names") {
  std::map<char, std::vector<EegSegment>> empty;
  CHECK_THROWS_AS(make_case(empty, "A-A"), UnknownCase);
  CHECK_THROWS_AS(make_case(empty, "E-A"), UnknownCase);
  CHECK_THROWS_AS(case_from_name("C-D"), UnknownCase);
  CHECK(case_from_name("A-E").positive_set == 'E');
}

namespace {

LabeledPool tiny_pool(int per_class) {
  LabeledPool pool;
  pool.case_name = "A-E";
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < per_class; ++i) {
      EegSegment s;
      s.set_letter = c ? 'E' : 'A';
      s.file_index = i;
      s.samples = {0.0, 1.0};
      pool.segments.push_back(std::move(s));
      pool.labels.push_back(c);
    }
  }
  return pool;
}

}  // namespace

TEST_CASE("stratified_split is deterministic and stratified") {
  const LabeledPool pool = tiny_pool(100);
  const SplitPlan a = stratified_split(pool, 7, 0.2);
  const SplitPlan b = stratified_split(pool, 7, 0.2);
  CHECK(a.train_indices == b.train_indices);
  CHECK(a.test_indices == b.test_indices);

  CHECK(a.test_indices.size() == 40);
  CHECK(a.train_indices.size() == 160);

  int test_by_class[2] = {0, 0};
  for (const int idx : a.test_indices) ++test_by_class[pool.labels[static_cast<std::size_t>(idx)]];
  CHECK(test_by_class[0] == 20);
  CHECK(test_by_class[1] == 20);

  // Different seeds move the plan.
  const SplitPlan c = stratified_split(pool, 8, 0.2);
  CHECK(a.test_indices != c.test_indices);
}

TEST_CASE("stratified_split partitions the pool for any seed") {
  const LabeledPool pool = tiny_pool(100);
  for (const std::uint64_t seed : {1ULL, 42ULL, 999ULL, 123456789ULL}) {
    CAPTURE(seed);
    const SplitPlan plan = stratified_split(pool, seed, 0.2);
    std::set<int> all(plan.train_indices.begin(), plan.train_indices.end());
    for (const int idx : plan.test_indices) {
      CHECK(all.insert(idx).second);  // no overlap
    }
    CHECK(all.size() == 200);
    CHECK(*all.begin() == 0);
    CHECK(*all.rbegin() == 199);
  }
}

TEST_CASE("degenerate fractions are rejected") {
  const LabeledPool pool = tiny_pool(100);
  CHECK_THROWS_AS(stratified_split(pool, 7, 0.005), DegenerateSplit);  // round(0.5) = 0
  CHECK_THROWS_AS(stratified_split(pool, 7, 0.999), DegenerateSplit);
  CHECK_THROWS_AS(stratified_split(pool, 7, 0.0), InvalidArgument);
  CHECK_THROWS_AS(stratified_split(pool, 7, 1.0), InvalidArgument);
}

TEST_CASE("audit_set reports problems without throwing") {
  TempDir tmp("epiwave-dataset");
  write_fake_set(tmp.path(), 'Z', 0);
  std::filesystem::remove(tmp.path() / "Z050.txt");
  {
    std::ofstream out(tmp.path() / "Z051.txt");
    out << "1\n2\nnotanumber\n";
  }

  const SetAudit audit = audit_set(tmp.path(), 'A');
  CHECK(audit.files_found == 99);
  REQUIRE(audit.problems.size() == 2);
  CHECK(audit.problems[0].find("Z050.txt") != std::string::npos);
  CHECK(audit.problems[1].find("Z051.txt") != std::string::npos);

  const SetAudit missing_dir = audit_set(tmp.path() / "gone", 'A');
  CHECK(missing_dir.problems.size() == 1);
}

TEST_SUITE_END();
