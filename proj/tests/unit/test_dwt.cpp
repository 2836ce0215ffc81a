#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "epiwave/dwt.hpp"
#include "epiwave/errors.hpp"
#include "oracles.hpp"

using namespace epiwave;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(n);
  for (double& v : x) {
    v = scale * (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0);
  }
  return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

const WaveletFamily kFamilies[] = {WaveletFamily::Haar, WaveletFamily::DB2, WaveletFamily::DB4};

}  // namespace

TEST_SUITE_BEGIN("dwt");

TEST_CASE("haar filters have the closed form") {
  const QuadFilterBank bank = build_filters(WaveletFamily::Haar);
  const double h = 1.0 / std::sqrt(2.0);
  REQUIRE(bank.length() == 2);
  CHECK(bank.analysis_low[0] == doctest::Approx(h).epsilon(1e-15));
  CHECK(bank.analysis_low[1] == doctest::Approx(h).epsilon(1e-15));
  CHECK(bank.analysis_high[0] == doctest::Approx(h).epsilon(1e-15));
  CHECK(bank.analysis_high[1] == doctest::Approx(-h).epsilon(1e-15));
}

TEST_CASE("filter banks satisfy the quadrature invariants") {
  for (const WaveletFamily family : kFamilies) {
    CAPTURE(to_string(family));
    const QuadFilterBank bank = build_filters(family);
    const int L = bank.length();
    REQUIRE(bank.analysis_high.size() == static_cast<std::size_t>(L));
    REQUIRE(bank.synthesis_low.size() == static_cast<std::size_t>(L));
    REQUIRE(bank.synthesis_high.size() == static_cast<std::size_t>(L));

    double sum_low = 0.0, sum_high = 0.0, energy = 0.0;
    for (int k = 0; k < L; ++k) {
      sum_low += bank.analysis_low[k];
      sum_high += bank.analysis_high[k];
      energy += bank.analysis_low[k] * bank.analysis_low[k];
      // Quadrature mirror relation.
      const double expected = ((k % 2 == 0) ? 1.0 : -1.0) * bank.analysis_low[L - 1 - k];
      CHECK(bank.analysis_high[k] == doctest::Approx(expected).epsilon(1e-15));
      // Synthesis filters are the time-reverse of analysis.
      CHECK(bank.synthesis_low[k] == bank.analysis_low[L - 1 - k]);
      CHECK(bank.synthesis_high[k] == bank.analysis_high[L - 1 - k]);
    }
    CHECK(std::abs(sum_low - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(sum_high) < 1e-12);
    CHECK(std::abs(energy - 1.0) < 1e-12);

    // Double-shift orthogonality of the low-pass filter.
    for (int shift = 2; shift < L; shift += 2) {
      double dot = 0.0;
      for (int k = 0; k + shift < L; ++k) dot += bank.analysis_low[k] * bank.analysis_low[k + shift];
      CHECK(std::abs(dot) < 1e-12);
    }
  }
}

TEST_CASE("db4 has four vanishing moments and db2 one") {
  // sum k^p (-1)^k h_low[L-1-k] = 0 for p below the moment count.
  auto moment = [](const QuadFilterBank& bank, int p) {
    double acc = 0.0;
    const int L = bank.length();
    for (int k = 0; k < L; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc += std::pow(static_cast<double>(k), p) * sign * bank.analysis_low[L - 1 - k];
    }
    return acc;
  };

  const QuadFilterBank db4 = build_filters(WaveletFamily::DB4);
  REQUIRE(db4.length() == 8);
  for (int p = 0; p <= 3; ++p) {
    CAPTURE(p);
    CHECK(std::abs(moment(db4, p)) < 1e-10);
  }

  const QuadFilterBank db2 = build_filters(WaveletFamily::DB2);
  REQUIRE(db2.length() == 4);
  CHECK(std::abs(moment(db2, 0)) < 1e-12);
  CHECK(std::abs(moment(db2, 1)) < 1e-12);
}

TEST_CASE("constant signals are annihilated by the detail branch") {
  const double c = 3.25;
  const std::vector<double> x(64, c);
  const QuadFilterBank bank = build_filters(WaveletFamily::Haar);
  const auto [approx, detail] = dwt_step(x, bank);
  REQUIRE(approx.size() == dwt_output_length(64, 2));
  for (const double d : detail) CHECK(std::abs(d) < 1e-12);
  for (const double a : approx) CHECK(a == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("output length follows floor((n + L - 1) / 2)") {
  const QuadFilterBank db4 = build_filters(WaveletFamily::DB4);
  const auto [approx, detail] = dwt_step(random_signal(10, 1), db4);
  CHECK(approx.size() == 8);  // floor((10 + 7) / 2)
  CHECK(detail.size() == 8);

  CHECK(dwt_output_length(4097, 8) == 2052);
}

TEST_CASE("dwt_step matches the literal pad-convolve-decimate oracle") {
  for (const WaveletFamily family : kFamilies) {
    CAPTURE(to_string(family));
    const QuadFilterBank bank = build_filters(family);
    for (const std::size_t n : {32UL, 33UL, 100UL}) {
      const std::vector<double> x = random_signal(n, 42 + n);
      const auto [approx, detail] = dwt_step(x, bank);
      const auto [oracle_approx, oracle_detail] =
          oracles::dwt_step(x, bank.analysis_low, bank.analysis_high);
      CHECK(max_abs_diff(approx, oracle_approx) < 1e-12);
      CHECK(max_abs_diff(detail, oracle_detail) < 1e-12);
    }
  }
}

TEST_CASE("dwt_step rejects degenerate inputs") {
  const QuadFilterBank bank = build_filters(WaveletFamily::Haar);
  CHECK_THROWS_AS(dwt_step(std::vector<double>{}, bank), SignalTooShort);
  CHECK_THROWS_AS(dwt_step(std::vector<double>{1.0}, bank), SignalTooShort);
}

TEST_CASE("idwt_step inverts dwt_step") {
  SUBCASE("haar, 64 samples") {
    const std::vector<double> x = random_signal(64, 7);
    const QuadFilterBank bank = build_filters(WaveletFamily::Haar);
    const auto [a, d] = dwt_step(x, bank);
    CHECK(max_abs_diff(idwt_step(a, d, bank, x.size()), x) < 1e-10);
  }
  SUBCASE("db4, 4097 samples") {
    const std::vector<double> x = random_signal(4097, 8, 100.0);
    const QuadFilterBank bank = build_filters(WaveletFamily::DB4);
    const auto [a, d] = dwt_step(x, bank);
    CHECK(max_abs_diff(idwt_step(a, d, bank, x.size()), x) < 1e-8);
  }
  SUBCASE("length mismatch") {
    const QuadFilterBank bank = build_filters(WaveletFamily::Haar);
    CHECK_THROWS_AS(idwt_step(std::vector<double>(5, 0.0), std::vector<double>(6, 0.0), bank),
                    BandLengthMismatch);
  }
}

TEST_CASE("wavedec yields the documented band lengths on 4097 samples") {
  const std::vector<double> x = random_signal(4097, 9);
  const WaveletDecomposition dec = wavedec(x, build_filters(WaveletFamily::DB4), 5);

  REQUIRE(dec.bands.size() == 6);
  const std::vector<std::string> expected_names = {"A5", "D5", "D4", "D3", "D2", "D1"};
  CHECK(dec.band_names() == expected_names);
  CHECK(dec.band("D1").size() == 2052);
  CHECK(dec.band("D2").size() == 1029);
  CHECK(dec.band("D3").size() == 518);
  CHECK(dec.band("D4").size() == 262);
  CHECK(dec.band("D5").size() == 134);
  CHECK(dec.band("A5").size() == 134);
}

TEST_CASE("wavedec of the zero signal is identically zero") {
  const std::vector<double> x(512, 0.0);
  const WaveletDecomposition dec = wavedec(x, build_filters(WaveletFamily::DB2), 5);
  for (const auto& [name, values] : dec.bands) {
    CAPTURE(name);
    for (const double v : values) CHECK(v == 0.0);
  }
}

TEST_CASE("wavedec rejects depths the signal cannot sustain") {
  const std::vector<double> x = random_signal(8, 3);
  CHECK_THROWS_AS(wavedec(x, build_filters(WaveletFamily::Haar), 5), DecompositionTooDeep);
}

TEST_CASE("waverec inverts wavedec for every family") {
  for (const WaveletFamily family : kFamilies) {
    CAPTURE(to_string(family));
    const QuadFilterBank bank = build_filters(family);
    for (const std::size_t n : {32UL, 1000UL, 4097UL}) {
      const std::vector<double> x = random_signal(n, 1000 + n, 50.0);
      const WaveletDecomposition dec = wavedec(x, bank, n >= 64 ? 5 : 3);
      const std::vector<double> back = waverec(dec, bank);
      double norm = 0.0;
      for (const double v : x) norm = std::max(norm, std::abs(v));
      CHECK(max_abs_diff(back, x) / norm < 1e-8);
    }
  }
}

TEST_CASE("waverec reports missing and inconsistent bands") {
  const std::vector<double> x = random_signal(256, 11);
  const QuadFilterBank bank = build_filters(WaveletFamily::DB2);
  WaveletDecomposition dec = wavedec(x, bank, 5);

  SUBCASE("removed band") {
    std::erase_if(dec.bands, [](const auto& kv) { return kv.first == "D3"; });
    CHECK_THROWS_AS(waverec(dec, bank), BandMissing);
  }
  SUBCASE("corrupted band length") {
    for (auto& [name, values] : dec.bands) {
      if (name == "D2") values.pop_back();
    }
    CHECK_THROWS_AS(waverec(dec, bank), BandLengthMismatch);
  }
  SUBCASE("zero decomposition reconstructs to zero") {
    for (auto& [name, values] : dec.bands) std::fill(values.begin(), values.end(), 0.0);
    for (const double v : waverec(dec, bank)) CHECK(v == 0.0);
  }
}

TEST_CASE("wavedec is linear") {
  const std::vector<double> x = random_signal(300, 21);
  const std::vector<double> y = random_signal(300, 22);
  const double alpha = 2.5, beta = -0.75;
  std::vector<double> combo(300);
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = alpha * x[i] + beta * y[i];

  const QuadFilterBank bank = build_filters(WaveletFamily::DB4);
  const WaveletDecomposition dx = wavedec(x, bank, 5);
  const WaveletDecomposition dy = wavedec(y, bank, 5);
  const WaveletDecomposition dc = wavedec(combo, bank, 5);

  for (std::size_t b = 0; b < dc.bands.size(); ++b) {
    const auto& combined = dc.bands[b].second;
    const auto& bx = dx.bands[b].second;
    const auto& by = dy.bands[b].second;
    for (std::size_t i = 0; i < combined.size(); ++i) {
      CHECK(std::abs(combined[i] - (alpha * bx[i] + beta * by[i])) < 1e-10);
    }
  }
}

TEST_CASE("adding a constant only moves the approximation path") {
  const std::vector<double> x = random_signal(4097, 33);
  std::vector<double> shifted = x;
  for (double& v : shifted) v += 17.0;

  for (const WaveletFamily family : kFamilies) {
    CAPTURE(to_string(family));
    const QuadFilterBank bank = build_filters(family);
    const WaveletDecomposition dec_x = wavedec(x, bank, 5);
    const WaveletDecomposition dec_shifted = wavedec(shifted, bank, 5);
    for (std::size_t b = 0; b < dec_x.bands.size(); ++b) {
      if (dec_x.bands[b].first[0] != 'D') continue;
      const auto& dv_x = dec_x.bands[b].second;
      const auto& dv_s = dec_shifted.bands[b].second;
      for (std::size_t i = 0; i < dv_x.size(); ++i) {
        CHECK(std::abs(dv_x[i] - dv_s[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("unknown family names are rejected") {
  CHECK_THROWS_AS(wavelet_family_from_string("sym5"), UnsupportedFamily);
  CHECK(wavelet_family_from_string("DB4") == WaveletFamily::DB4);
}

TEST_SUITE_END();
