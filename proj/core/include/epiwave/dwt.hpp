#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epiwave {

enum class WaveletFamily { Haar, DB2, DB4 };

WaveletFamily wavelet_family_from_string(std::string_view name);  // "haar","db2","db4"
std::string to_string(WaveletFamily family);

// Two-channel orthonormal filter bank. Analysis filters are applied by
// convolution; synthesis filters are the time-reverse of the analysis ones.
struct QuadFilterBank {
  WaveletFamily family;
  std::vector<double> analysis_low;
  std::vector<double> analysis_high;
  std::vector<double> synthesis_low;
  std::vector<double> synthesis_high;

  int length() const { return static_cast<int>(analysis_low.size()); }
};

QuadFilterBank build_filters(WaveletFamily family);

// Coefficient count of one analysis stage under half-sample symmetric
// extension: floor((n + L - 1) / 2).
std::size_t dwt_output_length(std::size_t n, int filter_length);

// One Mallat analysis stage: symmetric-pad, convolve, downsample by two.
std::pair<std::vector<double>, std::vector<double>> dwt_step(std::span<const double> signal,
                                                             const QuadFilterBank& bank);

// Inverse stage: upsample, convolve with the synthesis filters, sum, crop.
// The default output length 2*len(approx) - L + 2 inverts dwt_step exactly
// for even-length parents; odd-length parents pass the parent length.
std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              const QuadFilterBank& bank);
std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              const QuadFilterBank& bank, std::size_t out_length);

// Bands of one multilevel decomposition, ordered A5, D5, ..., D1 for the
// default five levels (Aj first, then details from deepest to shallowest).
struct WaveletDecomposition {
  WaveletFamily family;
  int levels = 0;
  std::size_t signal_length = 0;  // drives waverec crop lengths
  std::vector<std::pair<std::string, std::vector<double>>> bands;

  bool has_band(std::string_view name) const;
  const std::vector<double>& band(std::string_view name) const;  // throws BandMissing
  std::vector<std::string> band_names() const;
};

WaveletDecomposition wavedec(std::span<const double> signal, const QuadFilterBank& bank,
                             int levels = 5);
std::vector<double> waverec(const WaveletDecomposition& dec, const QuadFilterBank& bank);

}  // namespace epiwave
