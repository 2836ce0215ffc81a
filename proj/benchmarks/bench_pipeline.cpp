#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "epiwave/classifiers.hpp"
#include "epiwave/dwt.hpp"
#include "epiwave/features.hpp"
#include "epiwave/pca.hpp"

using namespace epiwave;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double scale = 100.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = scale * (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0);
  return x;
}

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      m(r, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
  }
  return m;
}

std::vector<int> alternating_labels(Eigen::Index n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
  return labels;
}

void Wavedec5(benchmark::State& state) {
  const auto family = static_cast<WaveletFamily>(state.range(0));
  const QuadFilterBank bank = build_filters(family);
  const std::vector<double> x = random_signal(4097, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavedec(x, bank, 5));
  }
}
BENCHMARK(Wavedec5)->Arg(0)->Arg(1)->Arg(2);  // haar, db2, db4

void WaverecRoundTrip(benchmark::State& state) {
  const QuadFilterBank bank = build_filters(WaveletFamily::DB4);
  const std::vector<double> x = random_signal(4097, 12);
  const WaveletDecomposition dec = wavedec(x, bank, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(waverec(dec, bank));
  }
}
BENCHMARK(WaverecRoundTrip);

void PcaFitGram(benchmark::State& state) {
  // Wide band matrix (d > n) exercises the Gram route, the shape the D1
  // band produces with 160 training rows.
  const Eigen::MatrixXd data = random_matrix(160, state.range(0), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pca_fit(data, 50));
  }
}
BENCHMARK(PcaFitGram)->Arg(2052)->Arg(518)->Unit(benchmark::kMillisecond);

void PcaFitDirect(benchmark::State& state) {
  const Eigen::MatrixXd data = random_matrix(160, 134, 14);  // A5/D5 shape
  for (auto _ : state) {
    benchmark::DoNotOptimize(pca_fit(data, 50));
  }
}
BENCHMARK(PcaFitDirect)->Unit(benchmark::kMillisecond);

void FuseMaxBands(benchmark::State& state) {
  std::vector<Eigen::MatrixXd> scores;
  for (int b = 0; b < 6; ++b) scores.push_back(random_matrix(160, 50, 20 + b));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse_max(scores));
  }
}
BENCHMARK(FuseMaxBands);

void Stats7Band(benchmark::State& state) {
  const std::vector<double> band = random_signal(2052, 15);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats7(band));
  }
}
BENCHMARK(Stats7Band);

void SvmFit160x50(benchmark::State& state) {
  Eigen::MatrixXd x = random_matrix(160, 50, 16);
  const std::vector<int> labels = alternating_labels(160);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    x(i, 0) += labels[static_cast<std::size_t>(i)] ? 1.5 : -1.5;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(svm_fit(x, labels, 1.0));
  }
}
BENCHMARK(SvmFit160x50)->Unit(benchmark::kMillisecond);

void KnnPredict40(benchmark::State& state) {
  const Eigen::MatrixXd train = random_matrix(160, 50, 17);
  const Eigen::MatrixXd queries = random_matrix(40, 50, 18);
  const KnnModel model = knn_fit(train, alternating_labels(160), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_predict_batch(model, queries));
  }
}
BENCHMARK(KnnPredict40);

void GnbFitPredict(benchmark::State& state) {
  const Eigen::MatrixXd train = random_matrix(160, 50, 19);
  const Eigen::MatrixXd queries = random_matrix(40, 50, 21);
  const std::vector<int> labels = alternating_labels(160);
  for (auto _ : state) {
    const GnbModel model = gnb_fit(train, labels);
    benchmark::DoNotOptimize(gnb_predict_batch(model, queries));
  }
}
BENCHMARK(GnbFitPredict);

}  // namespace

BENCHMARK_MAIN();
