// Random value generators shared by the fuzz tests and the acceptance run.
#pragma once

#include <cmath>
#include <random>
#include <string>

#include "pdac/config.hpp"

namespace pdac::testing {

/// RunConfig with every field drawn at random. Path strings avoid whitespace,
/// '#' and '=' so that they survive the key = value syntax.
inline RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto word = [&] {
    static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789_./-";
    std::string s(1 + pick(12), 'a');
    for (auto& c : s) c = kChars[pick(sizeof(kChars) - 1)];
    return s;
  };
  RunConfig c;
  c.mode = static_cast<RunMode>(pick(4));
  c.height = 8 + pick(500);
  c.width = 8 + pick(500);
  c.coils = 1 + pick(16);
  c.acceleration = 1 + pick(8);
  c.center_fraction = u(rng) * 0.2;
  c.schedule = static_cast<ScheduleShape>(pick(3));
  c.iterations = static_cast<int>(1 + pick(12));
  c.budgets.clear();
  if (pick(2) == 1) {
    std::size_t b = 1 + pick(10);
    for (int t = 0; t <= c.iterations; ++t) {
      c.budgets.push_back(b);
      b += 1 + pick(30);
    }
  }
  const std::size_t mus = pick(2) == 1 ? 1 : static_cast<std::size_t>(c.iterations) + 1;
  c.mu.assign(mus, 0.0);
  for (auto& m : c.mu) m = std::ldexp(u(rng) + 1e-3, static_cast<int>(pick(40)) - 20);
  c.lambda.assign(pick(2) == 1 ? 1 : static_cast<std::size_t>(c.iterations), 0.0);
  for (auto& l : c.lambda) l = u(rng) + 1e-9;
  c.denoiser = static_cast<DenoiserKind>(pick(4));
  c.inner_iterations = static_cast<int>(1 + pick(500));
  c.modulation_gain = pick(3) == 0 ? 0.0 : u(rng) * 10.0;
  c.predictor = static_cast<PredictorKind>(pick(3));
  c.solver = static_cast<SolverKind>(pick(3));
  c.noise_sigma = pick(2) == 0 ? 0.0 : u(rng);
  c.alpha = u(rng);
  c.refresh_image = pick(2) == 1;
  c.input = pick(3) == 0 ? "" : word();
  c.out = word();
  c.seed = std::uniform_int_distribution<std::uint64_t>()(rng);
  return c;
}

}  // namespace pdac::testing
