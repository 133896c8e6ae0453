#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdac/arrays.hpp"
#include "pdac/metrics.hpp"
#include "pdac/sampling.hpp"
#include "pdac/solver.hpp"

namespace pdac::io {

// KSP1 container: "KSP1", then coils, height, width as little-endian uint32,
// then coils * height * width (real, imag) pairs of little-endian float64,
// row-major within each coil plane.
inline constexpr std::string_view kKspMagic = "KSP1";
inline constexpr std::size_t kKspHeaderBytes = 16;

std::string encode_ksp(const ComplexStack& stack);
ComplexStack decode_ksp(std::string_view bytes);

void write_ksp(const std::filesystem::path& path, const ComplexStack& stack);
ComplexStack read_ksp(const std::filesystem::path& path);

/// Images are stored as single-coil KSP1 files.
void write_image(const std::filesystem::path& path, const ComplexImage& img);
ComplexImage read_image(const std::filesystem::path& path);

/// One ASCII line of '0'/'1', newline-terminated.
std::string encode_mask(const CartesianMask& mask);
CartesianMask decode_mask(std::string_view text);
void write_mask(const std::filesystem::path& path, const CartesianMask& mask);
CartesianMask read_mask(const std::filesystem::path& path);

/// Binary P5 PGM, maxval 65535, big-endian samples. Magnitudes are scaled by
/// 65535 / peak and clipped.
std::string encode_pgm(const ComplexImage& img, double peak);
void write_pgm(const std::filesystem::path& path, const ComplexImage& img, double peak);

/// Formats a metric value; an infinite PSNR becomes "exact".
std::string format_metric(double value);

inline constexpr std::string_view kMetricsHeader = "solver,psnr,ssim,nmse,l_rec,l_prob,l_total";
inline constexpr std::string_view kTraceHeader = "iteration,budget,mean_masked_confidence,psnr,mask";
inline constexpr std::string_view kAblationHeader = "schedule,predictor,psnr,ssim,nmse";

std::string metrics_row(std::string_view solver, const MetricSet& m, std::optional<double> l_prob);
std::string trace_csv(const ReconReport& report);

struct AblationRow {
  ScheduleShape schedule;
  PredictorKind predictor;
  MetricSet metrics;
};
std::string ablation_csv(const std::vector<AblationRow>& rows);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pdac::io
