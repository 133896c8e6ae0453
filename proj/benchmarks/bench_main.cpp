#include <benchmark/benchmark.h>

#include <random>

#include "pdac/denoisers.hpp"
#include "pdac/fft.hpp"
#include "pdac/forward_model.hpp"
#include "pdac/solver.hpp"

namespace {

pdac::ComplexImage noisy_image(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.05);
  pdac::ComplexImage img = pdac::shepp_logan(n, n);
  for (auto& v : img.data()) v += pdac::Complex(g(rng), g(rng));
  return img;
}

void BM_Fft2c(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pdac::ComplexImage img = noisy_image(n);
  for (auto _ : state) benchmark::DoNotOptimize(pdac::fft2c(img));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_Fft2c)->Arg(64)->Arg(128)->Arg(256)->Arg(384);

void BM_TvDenoise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pdac::ComplexImage img = noisy_image(n);
  for (auto _ : state) benchmark::DoNotOptimize(pdac::tv_denoise(img, 0.05, 50));
}
BENCHMARK(BM_TvDenoise)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SoftThreshold(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pdac::ComplexImage img = noisy_image(n);
  for (auto _ : state) benchmark::DoNotOptimize(pdac::soft_threshold_denoise(img, 0.05));
}
BENCHMARK(BM_SoftThreshold)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PdacReconstruct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto coils = static_cast<std::size_t>(state.range(1));
  const pdac::ComplexImage gt = pdac::shepp_logan(n, n);
  std::optional<pdac::CoilSensitivities> sens;
  if (coils > 1) sens = pdac::synth_sensitivities(coils, n, n);
  const pdac::CoilSensitivities* s = sens ? &*sens : nullptr;
  const auto m0 = pdac::make_acquisition_mask(n, 8, 0.04, 0);
  const pdac::KSpace truth = pdac::encode(gt, s);
  const pdac::KSpace y = pdac::degrade(truth, m0);
  auto cfg = pdac::PdacConfig::with_schedule(
      pdac::make_schedule(n, m0.budget(), 8, pdac::ScheduleShape::CoarseToFine), 1.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(pdac::pdac_reconstruct(y, m0, cfg, s, &truth));
}
BENCHMARK(BM_PdacReconstruct)->Args({128, 1})->Args({128, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
