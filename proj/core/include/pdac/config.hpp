#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pdac/denoisers.hpp"
#include "pdac/sampling.hpp"
#include "pdac/solver.hpp"

namespace pdac {

enum class RunMode { Simulate, Reconstruct, Evaluate, Ablate };
enum class SolverKind { Pdac, Hqs, ZeroFilled };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view name);
std::string_view to_string(SolverKind solver);
SolverKind parse_solver_kind(std::string_view name);

/// Everything a CLI run needs. Serialized as flat `key = value` lines; list
/// values are comma-separated, a single-element mu or lambda list is
/// broadcast over all iterations.
struct RunConfig {
  RunMode mode = RunMode::Simulate;
  std::size_t height = 128;
  std::size_t width = 128;
  std::size_t coils = 1;
  std::size_t acceleration = 8;
  double center_fraction = 0.04;
  ScheduleShape schedule = ScheduleShape::CoarseToFine;
  std::vector<std::size_t> budgets;  ///< explicit schedule, overrides `schedule` when set
  int iterations = 8;
  std::vector<double> mu{1.0};
  std::vector<double> lambda{0.01};
  DenoiserKind denoiser = DenoiserKind::Tv;
  int inner_iterations = 50;
  double modulation_gain = 0.0;
  PredictorKind predictor = PredictorKind::Oracle;
  SolverKind solver = SolverKind::Pdac;
  double noise_sigma = 0.0;
  double alpha = kDefaultProbLossWeight;
  bool refresh_image = true;
  std::string input;
  std::string out = ".";
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the first invalid key.
  void validate() const;

  /// Budget schedule for an acquisition mask with the given budget.
  BudgetSchedule budget_schedule(std::size_t m0_budget) const;
  PdacConfig pdac_config(std::size_t m0_budget) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Recognized keys in serialization order.
const std::vector<std::string_view>& config_keys();

/// Sets one key from its textual value. Unknown keys and malformed values
/// raise ConfigError naming the key.
void apply_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; '#' starts a comment, blank lines are ignored.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Canonical text form: every key in config_keys() order, one per line.
std::string format_config(const RunConfig& cfg);
std::string format_config_value(const RunConfig& cfg, std::string_view key);

}  // namespace pdac
