#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pdac/arrays.hpp"

namespace pdac {

/// Binary selection of full k-space columns (M = m 1^T). At least one column
/// is always sampled.
class CartesianMask {
 public:
  CartesianMask() = default;
  /// Throws ValidationError if no column is set or an entry is not 0/1.
  explicit CartesianMask(std::vector<std::uint8_t> cols);

  static CartesianMask full(std::size_t width);
  /// Parses a string of '0'/'1' characters (no newline).
  static CartesianMask from_string(std::string_view bits);

  std::size_t width() const noexcept { return cols_.size(); }
  std::size_t budget() const noexcept { return budget_; }
  bool sampled(std::size_t col) const { return cols_[col] != 0; }
  bool is_full() const noexcept { return budget_ == cols_.size(); }
  const std::vector<std::uint8_t>& cols() const noexcept { return cols_; }

  /// True when every sampled column of this mask is also sampled in `other`.
  bool subset_of(const CartesianMask& other) const;

  std::string to_string() const;

  friend bool operator==(const CartesianMask&, const CartesianMask&) = default;

 private:
  std::vector<std::uint8_t> cols_;
  std::size_t budget_ = 0;
};

/// Per-iteration column budgets b_0 < b_1 < ... < b_T = width.
struct BudgetSchedule {
  std::vector<std::size_t> budgets;

  std::size_t steps() const noexcept { return budgets.empty() ? 0 : budgets.size() - 1; }
  friend bool operator==(const BudgetSchedule&, const BudgetSchedule&) = default;
};

enum class ScheduleShape { CoarseToFine, Uniform, FineToCoarse };

std::string_view to_string(ScheduleShape shape);
ScheduleShape parse_schedule_shape(std::string_view name);

/// Per-column confidence p_t in [0, 1].
struct ConfidenceVector {
  std::vector<double> probs;

  std::size_t width() const noexcept { return probs.size(); }
  static ConfidenceVector ones(std::size_t width) { return {std::vector<double>(width, 1.0)}; }
  /// Throws ValidationError when an entry is outside [0, 1] or not finite.
  void validate() const;
};

/// Conditioning input for the denoiser: mask-weighted confidence plus the
/// fraction of columns already trusted.
struct SeverityContext {
  int iteration = 0;
  std::vector<double> masked_confidence;
  double budget_fraction = 1.0;

  /// Mean of masked_confidence over the mask support, whose size is
  /// budget_fraction * width.
  double mean_on_support() const;
};

/// Acquisition mask in the fastMRI style: round(width / acceleration) columns,
/// with the round(center_fraction * width) columns around DC always present and
/// the remainder spread equispaced over the off-center columns at a
/// seed-dependent offset.
CartesianMask make_acquisition_mask(std::size_t width, std::size_t acceleration, double center_fraction,
                                    std::uint64_t seed);

/// Number of contiguous low-frequency columns and the first of them.
struct CenterBlock {
  std::size_t first = 0;
  std::size_t count = 0;
};
CenterBlock center_block(std::size_t width, double center_fraction);

/// Checks b_0 == m0_budget, strict increase and b_T == width. Returns `s`.
const BudgetSchedule& validate_schedule(const BudgetSchedule& s, std::size_t width, std::size_t m0_budget);

/// Interpolates budgets from m0_budget to width in `steps` increments.
///
/// Coarse-to-fine gives every step one column and distributes the rest with
/// harmonic weights 1, 1/2, ..., 1/steps (floored, leftover columns handed to
/// the earliest steps), so increments are weakly decreasing. Fine-to-coarse
/// reverses those increments. Uniform uses round((width - m0) / steps) per step
/// with the residual absorbed by the last step, falling back to the floored
/// increment when the rounded one would leave the last step empty.
BudgetSchedule make_schedule(std::size_t width, std::size_t m0_budget, std::size_t steps, ScheduleShape shape);

/// Adds the (b_next - budget) unsampled columns with the largest confidence to
/// m_prev. Ties go to the smaller column index.
CartesianMask next_mask(const CartesianMask& m_prev, const ConfidenceVector& p, std::size_t b_next);

/// Result of scoring a reconstruction against ground-truth k-space.
struct OracleConfidence {
  ConfidenceVector confidence;            ///< p_j = 1 - squashed_error_j
  std::vector<double> squashed_error;     ///< 2 sigmoid(|e_j|) - 1
  std::vector<std::size_t> guarded_columns;  ///< columns whose ground-truth sum was zero
};

/// Normalized per-column error e_j = (sum z~[.,j] - sum y[.,j]) / sum y[.,j],
/// summed over rows and coils with complex arithmetic, squashed into [0, 1).
OracleConfidence oracle_confidence(const KSpace& z_tilde, const KSpace& y_gt);

/// Ground-truth-free confidence from how much the reconstruction step moved
/// each column: r_j = ||post - pre||_j / (||pre||_j + 1e-12).
ConfidenceVector heuristic_confidence(const KSpace& z_pre, const KSpace& z_post);

/// Uniform [0, 1) confidences; the location of new columns becomes random.
ConfidenceVector random_confidence(std::size_t width, std::mt19937_64& rng);

SeverityContext severity_context(const CartesianMask& m, const ConfidenceVector& p, int iteration);

/// 2 sigmoid(|x|) - 1.
double squash(double x);

}  // namespace pdac
