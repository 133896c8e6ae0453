#include "pdac/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "pdac/errors.hpp"

namespace pdac {

CartesianMask::CartesianMask(std::vector<std::uint8_t> cols) : cols_(std::move(cols)) {
  for (auto c : cols_) {
    if (c > 1) throw ValidationError("mask entries must be 0 or 1");
    budget_ += c;
  }
  if (budget_ == 0) throw ValidationError("mask must sample at least one column");
}

CartesianMask CartesianMask::full(std::size_t width) {
  return CartesianMask(std::vector<std::uint8_t>(width, 1));
}

CartesianMask CartesianMask::from_string(std::string_view bits) {
  std::vector<std::uint8_t> cols;
  cols.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw ValidationError(fmt::format("invalid mask character '{}'", ch));
    cols.push_back(ch == '1' ? 1 : 0);
  }
  return CartesianMask(std::move(cols));
}

bool CartesianMask::subset_of(const CartesianMask& other) const {
  if (other.width() != width()) return false;
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (cols_[j] && !other.cols_[j]) return false;
  }
  return true;
}

std::string CartesianMask::to_string() const {
  std::string s(cols_.size(), '0');
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (cols_[j]) s[j] = '1';
  }
  return s;
}

std::string_view to_string(ScheduleShape shape) {
  switch (shape) {
    case ScheduleShape::CoarseToFine:
      return "coarse-to-fine";
    case ScheduleShape::Uniform:
      return "uniform";
    case ScheduleShape::FineToCoarse:
      return "fine-to-coarse";
  }
  return "unknown";
}

ScheduleShape parse_schedule_shape(std::string_view name) {
  if (name == "coarse-to-fine") return ScheduleShape::CoarseToFine;
  if (name == "uniform") return ScheduleShape::Uniform;
  if (name == "fine-to-coarse") return ScheduleShape::FineToCoarse;
  throw ConfigError(fmt::format("unknown schedule shape '{}'", name));
}

void ConfidenceVector::validate() const {
  for (std::size_t j = 0; j < probs.size(); ++j) {
    const double p = probs[j];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError(fmt::format("confidence at column {} is outside [0, 1]: {}", j, p));
    }
  }
}

double SeverityContext::mean_on_support() const {
  const double support = std::round(budget_fraction * static_cast<double>(masked_confidence.size()));
  if (support < 1.0) return 1.0;
  return std::accumulate(masked_confidence.begin(), masked_confidence.end(), 0.0) / support;
}

CenterBlock center_block(std::size_t width, double center_fraction) {
  const auto count = static_cast<std::size_t>(std::llround(center_fraction * static_cast<double>(width)));
  if (count == 0) return {width / 2, 0};
  // Odd counts are symmetric about DC; even counts put the extra column right of DC.
  const std::size_t first = width / 2 - (count - 1) / 2;
  return {first, count};
}

CartesianMask make_acquisition_mask(std::size_t width, std::size_t acceleration, double center_fraction,
                                    std::uint64_t seed) {
  if (acceleration < 1 || acceleration > width) {
    throw ConfigError(fmt::format("acceleration must lie in [1, width={}], got {}", width, acceleration));
  }
  if (!(center_fraction > 0.0 && center_fraction < 1.0)) {
    throw ConfigError(fmt::format("center_fraction must lie in (0, 1), got {}", center_fraction));
  }
  if (acceleration == 1) return CartesianMask::full(width);

  const auto budget =
      static_cast<std::size_t>(std::llround(static_cast<double>(width) / static_cast<double>(acceleration)));
  const CenterBlock center = center_block(width, center_fraction);
  if (budget < center.count) {
    throw ConfigError(fmt::format("budget {} is smaller than the {}-column center block", budget, center.count));
  }

  std::vector<std::uint8_t> cols(width, 0);
  for (std::size_t j = center.first; j < center.first + center.count; ++j) cols[j] = 1;

  const std::size_t remaining = budget - center.count;
  if (remaining > 0) {
    std::vector<std::size_t> outer;
    outer.reserve(width - center.count);
    for (std::size_t j = 0; j < width; ++j) {
      if (!cols[j]) outer.push_back(j);
    }
    const double spacing = static_cast<double>(outer.size()) / static_cast<double>(remaining);
    std::mt19937_64 rng(seed);
    // 53 random mantissa bits, stable across standard libraries.
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double offset = unit * spacing;
    for (std::size_t k = 0; k < remaining; ++k) {
      const auto pos = static_cast<std::size_t>(std::floor(offset + static_cast<double>(k) * spacing));
      cols[outer[std::min(pos, outer.size() - 1)]] = 1;
    }
  }
  return CartesianMask(std::move(cols));
}

const BudgetSchedule& validate_schedule(const BudgetSchedule& s, std::size_t width, std::size_t m0_budget) {
  if (s.budgets.empty()) throw ScheduleError(0, "schedule is empty");
  if (s.budgets.front() != m0_budget) {
    throw ScheduleError(0, fmt::format("b_0 = {} does not match the acquisition budget {}", s.budgets.front(),
                                       m0_budget));
  }
  for (std::size_t t = 1; t < s.budgets.size(); ++t) {
    if (s.budgets[t] <= s.budgets[t - 1]) {
      throw ScheduleError(t, fmt::format("not strictly increasing ({} after {})", s.budgets[t], s.budgets[t - 1]));
    }
  }
  if (s.budgets.back() != width) {
    throw ScheduleError(s.budgets.size() - 1,
                        fmt::format("final budget {} does not equal the width {}", s.budgets.back(), width));
  }
  return s;
}

BudgetSchedule make_schedule(std::size_t width, std::size_t m0_budget, std::size_t steps, ScheduleShape shape) {
  if (steps < 1) throw ScheduleError(0, "at least one step is required");
  if (m0_budget < 1 || m0_budget >= width) {
    throw ScheduleError(0, fmt::format("m0 budget {} must lie in [1, width={})", m0_budget, width));
  }
  const std::size_t total = width - m0_budget;
  if (steps > total) {
    throw ScheduleError(steps, fmt::format("{} steps cannot strictly increase over {} columns", steps, total));
  }

  std::vector<std::size_t> increments(steps, 0);
  if (shape == ScheduleShape::Uniform) {
    auto inc = static_cast<std::size_t>(std::llround(static_cast<double>(total) / static_cast<double>(steps)));
    // Rounding up can starve the last step when steps is close to total.
    if (inc * (steps - 1) >= total) inc = total / steps;
    std::fill(increments.begin(), increments.end() - 1, inc);
    increments.back() = total - inc * (steps - 1);
  } else {
    std::vector<double> weights(steps);
    for (std::size_t k = 0; k < steps; ++k) weights[k] = 1.0 / static_cast<double>(k + 1);
    const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    const std::size_t spare = total - steps;
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < steps; ++k) {
      const auto share =
          static_cast<std::size_t>(std::floor(static_cast<double>(spare) * weights[k] / weight_sum));
      increments[k] = 1 + share;
      assigned += share;
    }
    for (std::size_t k = 0; assigned < spare; k = (k + 1) % steps, ++assigned) increments[k] += 1;
    if (shape == ScheduleShape::FineToCoarse) std::reverse(increments.begin(), increments.end());
  }

  BudgetSchedule s;
  s.budgets.reserve(steps + 1);
  s.budgets.push_back(m0_budget);
  for (auto inc : increments) s.budgets.push_back(s.budgets.back() + inc);
  return s;
}

CartesianMask next_mask(const CartesianMask& m_prev, const ConfidenceVector& p, std::size_t b_next) {
  const std::size_t width = m_prev.width();
  if (p.width() != width) throw ShapeError("next_mask: confidence width does not match mask width");
  if (b_next > width) throw ScheduleError(fmt::format("budget {} exceeds width {}", b_next, width));
  if (b_next < m_prev.budget()) {
    throw ScheduleError(fmt::format("budget {} is below the previous mask budget {}", b_next, m_prev.budget()));
  }

  std::vector<std::size_t> candidates;
  candidates.reserve(width - m_prev.budget());
  for (std::size_t j = 0; j < width; ++j) {
    if (!m_prev.sampled(j)) candidates.push_back(j);
  }
  const std::size_t add = b_next - m_prev.budget();
  // Candidates are in ascending index order, so a stable sort keeps the
  // smaller index first among equal confidences.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return p.probs[a] > p.probs[b]; });

  std::vector<std::uint8_t> cols = m_prev.cols();
  for (std::size_t k = 0; k < add; ++k) cols[candidates[k]] = 1;
  return CartesianMask(std::move(cols));
}

double squash(double x) { return 2.0 / (1.0 + std::exp(-std::abs(x))) - 1.0; }

namespace {

std::vector<Complex> column_sums(const KSpace& k) {
  std::vector<Complex> sums(k.width(), Complex{});
  for (std::size_t c = 0; c < k.coils(); ++c) {
    for (std::size_t r = 0; r < k.height(); ++r) {
      for (std::size_t j = 0; j < k.width(); ++j) sums[j] += k(c, r, j);
    }
  }
  return sums;
}

}  // namespace

OracleConfidence oracle_confidence(const KSpace& z_tilde, const KSpace& y_gt) {
  if (!z_tilde.same_shape(y_gt)) throw ShapeError("oracle_confidence: shape mismatch");
  const auto recon = column_sums(z_tilde);
  const auto truth = column_sums(y_gt);

  OracleConfidence out;
  out.confidence.probs.resize(recon.size());
  out.squashed_error.resize(recon.size());
  for (std::size_t j = 0; j < recon.size(); ++j) {
    if (truth[j] == Complex{}) {
      out.confidence.probs[j] = 0.0;
      out.squashed_error[j] = 1.0;
      out.guarded_columns.push_back(j);
      continue;
    }
    const Complex e = (recon[j] - truth[j]) / truth[j];
    out.squashed_error[j] = squash(std::abs(e));
    out.confidence.probs[j] = 1.0 - out.squashed_error[j];
  }
  return out;
}

ConfidenceVector heuristic_confidence(const KSpace& z_pre, const KSpace& z_post) {
  if (!z_pre.same_shape(z_post)) throw ShapeError("heuristic_confidence: shape mismatch");
  constexpr double kGuard = 1e-12;
  const std::size_t width = z_pre.width();
  std::vector<double> diff(width, 0.0);
  std::vector<double> base(width, 0.0);
  for (std::size_t c = 0; c < z_pre.coils(); ++c) {
    for (std::size_t r = 0; r < z_pre.height(); ++r) {
      for (std::size_t j = 0; j < width; ++j) {
        diff[j] += std::norm(z_post(c, r, j) - z_pre(c, r, j));
        base[j] += std::norm(z_pre(c, r, j));
      }
    }
  }
  ConfidenceVector p;
  p.probs.resize(width);
  for (std::size_t j = 0; j < width; ++j) {
    const double rel = std::sqrt(diff[j]) / (std::sqrt(base[j]) + kGuard);
    p.probs[j] = 1.0 - squash(rel);
  }
  return p;
}

ConfidenceVector random_confidence(std::size_t width, std::mt19937_64& rng) {
  ConfidenceVector p;
  p.probs.resize(width);
  for (auto& v : p.probs) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return p;
}

SeverityContext severity_context(const CartesianMask& m, const ConfidenceVector& p, int iteration) {
  if (p.width() != m.width()) throw ShapeError("severity_context: width mismatch");
  SeverityContext ctx;
  ctx.iteration = iteration;
  ctx.masked_confidence.resize(m.width());
  for (std::size_t j = 0; j < m.width(); ++j) ctx.masked_confidence[j] = m.sampled(j) ? p.probs[j] : 0.0;
  ctx.budget_fraction = static_cast<double>(m.budget()) / static_cast<double>(m.width());
  return ctx;
}

}  // namespace pdac
