#include "qrfcomm/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qrfcomm;
namespace k = qrfcomm::kernels;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index n) {
  std::mt19937 gen(5);
  std::normal_distribution<double> d;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(d(gen), d(gen));
  return m;
}

template <bool Parallel>
void BM_transform_columns(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(20.0, n);
  const auto m = random_matrix(static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    Eigen::MatrixXcd c = m;
    if constexpr (Parallel) {
      k::parallel::transform_columns(c, g, k::Direction::Forward);
    } else {
      k::serial::transform_columns(c, g, k::Direction::Forward);
    }
    benchmark::DoNotOptimize(c.data());
  }
}

template <bool Parallel>
void BM_modulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_matrix(static_cast<Eigen::Index>(n));
  std::vector<Complex> f(2 * n - 1, Complex(0.5, 0.1));
  for (auto _ : state) {
    Eigen::MatrixXcd c = m;
    if constexpr (Parallel) {
      k::parallel::modulate_by_difference(c, f);
    } else {
      k::serial::modulate_by_difference(c, f);
    }
    benchmark::DoNotOptimize(c.data());
  }
}

template <bool Parallel>
void BM_phase_mixture(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(20.0, n);
  const auto m = random_matrix(static_cast<Eigen::Index>(n));
  const auto p = g.momenta();
  std::vector<double> shifts(64);
  std::vector<double> weights(64, 1.0 / 64);
  for (std::size_t s = 0; s < shifts.size(); ++s) shifts[s] = -1.0 + 2.0 * static_cast<double>(s) / 63.0;
  for (auto _ : state) {
    auto out = Parallel ? k::parallel::phase_mixture(m, p, shifts, weights)
                        : k::serial::phase_mixture(m, p, shifts, weights);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_autocorrelation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_matrix(static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    auto out = Parallel ? k::parallel::difference_autocorrelation(m, 0.1)
                        : k::serial::difference_autocorrelation(m, 0.1);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_transform_columns<false>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_transform_columns<true>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_modulate<false>)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_modulate<true>)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_phase_mixture<false>)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_phase_mixture<true>)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_autocorrelation<false>)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_autocorrelation<true>)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
