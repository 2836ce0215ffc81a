#include "epiwave/dwt.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "epiwave/errors.hpp"

namespace epiwave {

namespace {

// Half-sample symmetric extension: ... x1 x0 | x0 x1 ... x{n-1} | x{n-1} ...
// Folds repeatedly so it stays valid when the filter is longer than the signal.
inline std::size_t sym_index(long long t, std::size_t n) {
  const long long nn = static_cast<long long>(n);
  while (t < 0 || t >= nn) {
    if (t < 0) t = -1 - t;
    if (t >= nn) t = 2 * nn - 1 - t;
  }
  return static_cast<std::size_t>(t);
}

// Minimum-phase Daubechies scaling filter with four vanishing moments,
// normalized so the coefficients sum to sqrt(2). There is no closed form for
// this order; the constants are the standard published values and are pinned
// by the orthonormality and vanishing-moment checks in the tests.
constexpr double kDb4Scaling[8] = {
    0.23037781330885523,   0.71484657055254153,  0.63088076792959036,
    -0.027983769416983849, -0.18703481171888114, 0.030841381835986965,
    0.032883011666982945,  -0.010597401784997278};

std::vector<double> scaling_filter(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::Haar: {
      const double h = 1.0 / std::sqrt(2.0);
      return {h, h};
    }
    case WaveletFamily::DB2: {
      const double s3 = std::sqrt(3.0);
      const double norm = 4.0 * std::sqrt(2.0);
      return {(1.0 + s3) / norm, (3.0 + s3) / norm, (3.0 - s3) / norm, (1.0 - s3) / norm};
    }
    case WaveletFamily::DB4:
      return {kDb4Scaling, kDb4Scaling + 8};
  }
  throw UnsupportedFamily("enum value " + std::to_string(static_cast<int>(family)));
}

}  // namespace

WaveletFamily wavelet_family_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "haar") return WaveletFamily::Haar;
  if (lower == "db2") return WaveletFamily::DB2;
  if (lower == "db4") return WaveletFamily::DB4;
  throw UnsupportedFamily(std::string(name));
}

std::string to_string(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::Haar: return "haar";
    case WaveletFamily::DB2: return "db2";
    case WaveletFamily::DB4: return "db4";
  }
  return "?";
}

QuadFilterBank build_filters(WaveletFamily family) {
  // Analysis low-pass is the time-reversed scaling filter, so that applying
  // it by convolution correlates the signal with the scaling function.
  std::vector<double> h = scaling_filter(family);
  const std::size_t L = h.size();

  QuadFilterBank bank;
  bank.family = family;
  bank.analysis_low.assign(h.rbegin(), h.rend());
  bank.analysis_high.resize(L);
  for (std::size_t k = 0; k < L; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    bank.analysis_high[k] = sign * bank.analysis_low[L - 1 - k];
  }
  bank.synthesis_low.assign(bank.analysis_low.rbegin(), bank.analysis_low.rend());
  bank.synthesis_high.assign(bank.analysis_high.rbegin(), bank.analysis_high.rend());
  return bank;
}

std::size_t dwt_output_length(std::size_t n, int filter_length) {
  return (n + static_cast<std::size_t>(filter_length) - 1) / 2;
}

std::pair<std::vector<double>, std::vector<double>> dwt_step(std::span<const double> signal,
                                                             const QuadFilterBank& bank) {
  const std::size_t n = signal.size();
  if (n < 2) throw SignalTooShort("dwt_step needs at least 2 samples, got " + std::to_string(n));

  const int L = bank.length();
  const std::size_t out_n = dwt_output_length(n, L);
  std::vector<double> approx(out_n), detail(out_n);

  for (std::size_t i = 0; i < out_n; ++i) {
    double a = 0.0, d = 0.0;
    const long long base = 2 * static_cast<long long>(i) + 1;
    for (int k = 0; k < L; ++k) {
      const double x = signal[sym_index(base - k, n)];
      a += bank.analysis_low[static_cast<std::size_t>(k)] * x;
      d += bank.analysis_high[static_cast<std::size_t>(k)] * x;
    }
    approx[i] = a;
    detail[i] = d;
  }
  return {std::move(approx), std::move(detail)};
}

std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              const QuadFilterBank& bank) {
  const int L = bank.length();
  const std::size_t nc = approx.size();
  if (2 * nc + 2 < static_cast<std::size_t>(L)) {
    throw SignalTooShort("coefficient vectors too short for filter length " + std::to_string(L));
  }
  return idwt_step(approx, detail, bank, 2 * nc - static_cast<std::size_t>(L) + 2);
}

std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              const QuadFilterBank& bank, std::size_t out_length) {
  if (approx.size() != detail.size()) {
    throw BandLengthMismatch("approx length " + std::to_string(approx.size()) +
                             " != detail length " + std::to_string(detail.size()));
  }
  const int L = bank.length();
  const std::size_t nc = approx.size();
  if (nc == 0 || out_length > 2 * nc) {
    throw BandLengthMismatch("requested output length " + std::to_string(out_length) +
                             " exceeds reconstructable range for " + std::to_string(nc) +
                             " coefficients");
  }

  // x_hat[m] = sum_i a[i] g_lo[m + L - 2 - 2i] + d[i] g_hi[m + L - 2 - 2i],
  // the full upsample-convolve with the leading L-2 padding samples cropped.
  std::vector<double> out(out_length, 0.0);
  for (std::size_t m = 0; m < out_length; ++m) {
    const long long t = static_cast<long long>(m) + L - 2;
    double acc = 0.0;
    for (int k = (t % 2 == 0) ? 0 : 1; k < L; k += 2) {
      const long long i = (t - k) / 2;
      if (i < 0 || i >= static_cast<long long>(nc)) continue;
      acc += approx[static_cast<std::size_t>(i)] * bank.synthesis_low[static_cast<std::size_t>(k)] +
             detail[static_cast<std::size_t>(i)] * bank.synthesis_high[static_cast<std::size_t>(k)];
    }
    out[m] = acc;
  }
  return out;
}

bool WaveletDecomposition::has_band(std::string_view name) const {
  for (const auto& [key, _] : bands) {
    if (key == name) return true;
  }
  return false;
}

const std::vector<double>& WaveletDecomposition::band(std::string_view name) const {
  for (const auto& [key, values] : bands) {
    if (key == name) return values;
  }
  throw BandMissing(std::string(name));
}

std::vector<std::string> WaveletDecomposition::band_names() const {
  std::vector<std::string> names;
  names.reserve(bands.size());
  for (const auto& [key, _] : bands) names.push_back(key);
  return names;
}

WaveletDecomposition wavedec(std::span<const double> signal, const QuadFilterBank& bank,
                             int levels) {
  if (levels < 1) throw InvalidArgument("levels must be >= 1");
  const std::size_t n = signal.size();

  // The deepest approximation must keep at least 2 samples.
  std::size_t len = n;
  for (int j = 0; j < levels; ++j) {
    if (len < 2) {
      throw DecompositionTooDeep("signal of length " + std::to_string(n) + " cannot sustain " +
                                 std::to_string(levels) + " levels");
    }
    len = dwt_output_length(len, bank.length());
  }

  WaveletDecomposition dec;
  dec.family = bank.family;
  dec.levels = levels;
  dec.signal_length = n;

  std::vector<std::vector<double>> details(static_cast<std::size_t>(levels));
  std::vector<double> approx(signal.begin(), signal.end());
  for (int j = 0; j < levels; ++j) {
    auto [a, d] = dwt_step(approx, bank);
    details[static_cast<std::size_t>(j)] = std::move(d);
    approx = std::move(a);
  }

  dec.bands.reserve(static_cast<std::size_t>(levels) + 1);
  dec.bands.emplace_back("A" + std::to_string(levels), std::move(approx));
  for (int j = levels; j >= 1; --j) {
    dec.bands.emplace_back("D" + std::to_string(j), std::move(details[static_cast<std::size_t>(j - 1)]));
  }
  return dec;
}

std::vector<double> waverec(const WaveletDecomposition& dec, const QuadFilterBank& bank) {
  if (dec.levels < 1) throw InvalidArgument("decomposition has no levels");
  if (bank.family != dec.family) {
    throw InvalidArgument("filter bank family " + to_string(bank.family) +
                          " does not match decomposition family " + to_string(dec.family));
  }

  // Expected band lengths from the analysis recurrence.
  std::vector<std::size_t> level_len(static_cast<std::size_t>(dec.levels) + 1);
  level_len[0] = dec.signal_length;
  for (int j = 1; j <= dec.levels; ++j) {
    level_len[static_cast<std::size_t>(j)] =
        dwt_output_length(level_len[static_cast<std::size_t>(j - 1)], bank.length());
  }

  const std::string approx_name = "A" + std::to_string(dec.levels);
  const std::vector<double>* approx = &dec.band(approx_name);
  if (approx->size() != level_len[static_cast<std::size_t>(dec.levels)]) {
    throw BandLengthMismatch(approx_name + " has length " + std::to_string(approx->size()) +
                             ", expected " +
                             std::to_string(level_len[static_cast<std::size_t>(dec.levels)]));
  }

  std::vector<double> current = *approx;
  for (int j = dec.levels; j >= 1; --j) {
    const std::string detail_name = "D" + std::to_string(j);
    const std::vector<double>& detail = dec.band(detail_name);
    if (detail.size() != level_len[static_cast<std::size_t>(j)]) {
      throw BandLengthMismatch(detail_name + " has length " + std::to_string(detail.size()) +
                               ", expected " + std::to_string(level_len[static_cast<std::size_t>(j)]));
    }
    current = idwt_step(current, detail, bank, level_len[static_cast<std::size_t>(j - 1)]);
  }
  return current;
}

}  // namespace epiwave
