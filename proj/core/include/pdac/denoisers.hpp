#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "pdac/arrays.hpp"
#include "pdac/sampling.hpp"

namespace pdac {

struct DenoiserParams {
  double strength = 0.05;      ///< lambda, regularizer weight
  int inner_iterations = 50;   ///< solver iterations for iterative variants
  double modulation_gain = 0;  ///< severity conditioning gain, 0 disables it

  /// Throws ConfigError unless strength > 0, inner_iterations >= 1, gain >= 0.
  void validate() const;
};

/// lambda * (1 + gain * (1 - mean masked confidence on the support)).
/// Less trusted k-space means a stronger prior.
double effective_strength(const DenoiserParams& params, const SeverityContext& ctx);

enum class DenoiserKind { Identity, Tv, DctSoft, Oracle };

std::string_view to_string(DenoiserKind kind);
DenoiserKind parse_denoiser_kind(std::string_view name);

/// Reconstruction step of one unrolled iteration, acting on k-space.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual DenoiserKind kind() const noexcept = 0;
  virtual KSpace denoise(const KSpace& z, const SeverityContext& ctx, const DenoiserParams& params) const = 0;
};

/// Denoisers defined in the image domain. denoise() maps each coil through
/// ifft2c, applies denoise_image with the modulated strength, and maps back.
class ImageDomainDenoiser : public Denoiser {
 public:
  KSpace denoise(const KSpace& z, const SeverityContext& ctx, const DenoiserParams& params) const final;
  virtual ComplexImage denoise_image(const ComplexImage& img, double strength, const DenoiserParams& params) const = 0;
};

class IdentityDenoiser final : public Denoiser {
 public:
  DenoiserKind kind() const noexcept override { return DenoiserKind::Identity; }
  KSpace denoise(const KSpace& z, const SeverityContext& ctx, const DenoiserParams& params) const override;
};

class TvDenoiser final : public ImageDomainDenoiser {
 public:
  DenoiserKind kind() const noexcept override { return DenoiserKind::Tv; }
  ComplexImage denoise_image(const ComplexImage& img, double strength, const DenoiserParams& params) const override;
};

class DctSoftDenoiser final : public ImageDomainDenoiser {
 public:
  DenoiserKind kind() const noexcept override { return DenoiserKind::DctSoft; }
  ComplexImage denoise_image(const ComplexImage& img, double strength, const DenoiserParams& params) const override;
};

/// Returns the ground-truth k-space regardless of input. Upper bound for tests.
class OracleDenoiser final : public Denoiser {
 public:
  explicit OracleDenoiser(KSpace truth) : truth_(std::move(truth)) {}
  DenoiserKind kind() const noexcept override { return DenoiserKind::Oracle; }
  KSpace denoise(const KSpace& z, const SeverityContext& ctx, const DenoiserParams& params) const override;

 private:
  KSpace truth_;
};

/// Throws ConfigError for the oracle kind when no ground truth is supplied.
std::unique_ptr<Denoiser> make_denoiser(DenoiserKind kind, const KSpace* truth = nullptr);

/// Isotropic total-variation denoising, min_u 1/2 ||u - img||^2 + lambda TV(u),
/// by projected gradient on the dual field (step 1/8). Returns the primal iterate
/// of lowest energy seen, so the energy never increases with more iterations.
/// Real and imaginary parts are processed independently.
ComplexImage tv_denoise(const ComplexImage& img, double lambda, int iterations);

/// tv_denoise that also records the primal objective after every iteration
/// (entry 0 is the objective of the input itself).
struct TvTrace {
  ComplexImage image;
  std::vector<double> objective;
};
TvTrace tv_denoise_traced(const ComplexImage& img, double lambda, int iterations);

/// 1/2 ||u - f||^2 + lambda (TV(Re u) + TV(Im u)).
double tv_objective(const ComplexImage& u, const ComplexImage& f, double lambda);

/// Soft-thresholds complex orthonormal 2D DCT coefficients by lambda.
ComplexImage soft_threshold_denoise(const ComplexImage& img, double lambda);

}  // namespace pdac
