#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pdac/arrays.hpp"
#include "pdac/denoisers.hpp"
#include "pdac/forward_model.hpp"
#include "pdac/metrics.hpp"
#include "pdac/sampling.hpp"

namespace pdac {

enum class PredictorKind { Oracle, Heuristic, Random };

std::string_view to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(std::string_view name);

struct PdacConfig {
  /// Number of unrolled iterations T; the schedule carries T + 1 budgets.
  int iterations = 8;
  /// Penalty weights mu_0 ... mu_T.
  std::vector<double> mu;
  BudgetSchedule schedule;
  DenoiserKind denoiser = DenoiserKind::Tv;
  /// Denoiser strengths lambda_1 ... lambda_T.
  std::vector<double> strengths;
  int inner_iterations = 50;
  double modulation_gain = 0.0;
  PredictorKind predictor = PredictorKind::Oracle;
  std::uint64_t seed = 0;
  /// Re-derive the image estimate from z_t after every iteration. When false
  /// the anchor stays at the zero-filled image.
  bool refresh_image = true;
  /// Weight of the probability loss in the reported total loss.
  double alpha = kDefaultProbLossWeight;

  /// Builds a config with constant mu and lambda for the given schedule.
  static PdacConfig with_schedule(BudgetSchedule schedule, double mu = 1.0, double strength = 0.05);

  /// Throws ConfigError / ScheduleError on any inconsistency.
  void validate() const;
  DenoiserParams denoiser_params(int t) const;
};

struct IterationRecord {
  std::size_t budget = 0;
  CartesianMask mask;
  double mean_masked_confidence = 0.0;
  std::optional<double> psnr;  ///< intermediate PSNR when ground truth is known
};

struct ReconReport {
  ComplexImage final_image;
  std::vector<IterationRecord> iterations;
  std::optional<MetricSet> metrics;
  std::optional<double> prob_loss;
  /// Columns where the ground-truth column sum vanished and the oracle
  /// confidence fell back to 0.
  std::vector<std::size_t> guarded_columns;
};

/// Closed-form minimizer of mu_prev ||z_prev - D_prev z||^2 + mu_t ||z - ax||^2,
/// evaluated entrywise: (mu_prev d z_prev + mu_t ax) / (mu_prev d + mu_t).
KSpace data_consistency(const KSpace& z_prev, const CartesianMask& m_prev, const KSpace& ax, double mu_prev,
                        double mu_t);

/// Progressive reconstruction: data consistency, reconstruction and
/// degradation onto a growing column mask. `sens` is required for multi-coil
/// data; `truth` (fully sampled, noise-free k-space) is required by the oracle
/// predictor and oracle denoiser, and enables metrics.
ReconReport pdac_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                             const CoilSensitivities* sens = nullptr, const KSpace* truth = nullptr);
ReconReport pdac_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                             const Denoiser& denoiser, const CoilSensitivities* sens = nullptr,
                             const KSpace* truth = nullptr);

/// Per-entry minimizer of ||y - D z||^2 + mu ||z - encode(x_prev)||^2.
KSpace hqs_data_consistency(const ComplexImage& x_prev, const KSpace& y, const CartesianMask& m0, double mu,
                            const CoilSensitivities* sens = nullptr);

/// Conventional unrolled half-quadratic splitting: every iteration restores
/// consistency with the original measurement, then denoises.
ReconReport hqs_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                            const CoilSensitivities* sens = nullptr, const KSpace* truth = nullptr);
ReconReport hqs_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                            const Denoiser& denoiser, const CoilSensitivities* sens = nullptr,
                            const KSpace* truth = nullptr);

/// Adjoint reconstruction of the measured data with no iterations.
ReconReport zero_filled_reconstruct(const KSpace& y, const CoilSensitivities* sens = nullptr,
                                    const KSpace* truth = nullptr, double alpha = kDefaultProbLossWeight);

}  // namespace pdac
