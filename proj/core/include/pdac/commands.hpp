#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "pdac/config.hpp"
#include "pdac/forward_model.hpp"
#include "pdac/io.hpp"
#include "pdac/solver.hpp"

namespace pdac {

/// File names used inside input/output directories.
namespace files {
inline constexpr const char* kGroundTruth = "ground_truth.ksp";
inline constexpr const char* kSensitivities = "sensitivities.ksp";
inline constexpr const char* kMask = "mask.txt";
inline constexpr const char* kKSpace = "kspace.ksp";
inline constexpr const char* kReconImage = "recon.pgm";
inline constexpr const char* kRecon = "recon.ksp";
inline constexpr const char* kTrace = "trace.csv";
inline constexpr const char* kMetrics = "metrics.csv";
inline constexpr const char* kEvaluation = "evaluation.csv";
inline constexpr const char* kAblation = "ablation.csv";
}  // namespace files

/// A simulated acquisition: phantom, optional coil maps, mask and measurement.
struct Acquisition {
  ComplexImage ground_truth;
  std::optional<CoilSensitivities> sensitivities;
  CartesianMask mask;
  KSpace kspace;

  const CoilSensitivities* sens() const { return sensitivities ? &*sensitivities : nullptr; }
  /// Fully sampled, noise-free k-space of the ground truth.
  KSpace truth_kspace() const { return encode(ground_truth, sens()); }
};

/// Deterministic for a given config (seed drives the mask offset and noise).
Acquisition simulate(const RunConfig& cfg);

/// Runs the configured solver on an acquisition.
ReconReport reconstruct(const Acquisition& acq, const RunConfig& cfg);

void save_acquisition(const Acquisition& acq, const std::filesystem::path& dir);
Acquisition load_acquisition(const std::filesystem::path& dir);

/// `simulate`: writes ground truth, sensitivities (multi-coil only), mask and k-space.
Acquisition cmd_simulate(const RunConfig& cfg);

/// `reconstruct`: reads a simulated acquisition from cfg.input (or cfg.out when
/// unset) and writes the PGM magnitude, complex reconstruction, trace and metrics.
ReconReport cmd_reconstruct(const RunConfig& cfg);

/// `evaluate`: compares recon.ksp against ground_truth.ksp and writes evaluation.csv.
MetricSet cmd_evaluate(const RunConfig& cfg);

/// `ablate`: 3 schedule shapes x 3 predictors on one simulated instance.
std::vector<io::AblationRow> cmd_ablate(const RunConfig& cfg);
std::vector<io::AblationRow> run_ablation(const Acquisition& acq, const RunConfig& cfg);

}  // namespace pdac
