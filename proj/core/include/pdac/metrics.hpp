#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdac/arrays.hpp"
#include "pdac/sampling.hpp"

namespace pdac {

/// Real-valued H x W image, used for magnitude images.
struct RealImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;
};

RealImage magnitude(const ComplexImage& img);

/// 10 log10(peak^2 / MSE) on magnitude images, peak = max |gt|.
/// Returns +infinity when the images agree exactly. Throws MetricError for an
/// all-zero reference.
double psnr(const ComplexImage& x, const ComplexImage& gt);

/// Mean structural similarity over all 7x7 windows lying inside the image
/// (k1 = 0.01, k2 = 0.03, unbiased local variances, data range = max |gt|).
/// The complex overload compares magnitude images.
double ssim(const RealImage& x, const RealImage& gt);
double ssim(const ComplexImage& x, const ComplexImage& gt);

/// ||x - gt||^2 / ||gt||^2 on complex images.
double nmse(const ComplexImage& x, const ComplexImage& gt);

/// Mean absolute difference of magnitude images.
double rec_loss(const ComplexImage& x, const ComplexImage& gt);

/// One iteration's contribution to the decomposed degradation loss.
struct ProbLossTerm {
  CartesianMask mask;
  ConfidenceVector confidence;
  std::vector<double> squashed_error;
};

/// sum_t || m_t (p_t - (1 - e^_t)) ||_1
double prob_loss(const std::vector<ProbLossTerm>& trace);

/// l_rec + alpha * l_prob. Throws ConfigError for negative alpha.
double total_loss(double l_rec, double l_prob, double alpha);

/// Weight of the probability loss used in training.
inline constexpr double kDefaultProbLossWeight = 0.01;

struct MetricSet {
  double psnr = 0.0;
  double ssim = 0.0;
  double nmse = 0.0;
  double l_rec = 0.0;
  double l_prob = 0.0;
  double l_total = 0.0;
};

MetricSet evaluate(const ComplexImage& x, const ComplexImage& gt, double l_prob = 0.0,
                   double alpha = kDefaultProbLossWeight);

}  // namespace pdac
