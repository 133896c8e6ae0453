#include "pdac/denoisers.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pdac/errors.hpp"
#include "pdac/fft.hpp"

namespace pdac {

void DenoiserParams::validate() const {
  if (!(strength > 0.0)) throw ConfigError(fmt::format("denoiser strength must be positive, got {}", strength));
  if (inner_iterations < 1) {
    throw ConfigError(fmt::format("inner_iterations must be at least 1, got {}", inner_iterations));
  }
  if (!(modulation_gain >= 0.0)) {
    throw ConfigError(fmt::format("modulation_gain must be nonnegative, got {}", modulation_gain));
  }
}

double effective_strength(const DenoiserParams& params, const SeverityContext& ctx) {
  if (params.modulation_gain == 0.0) return params.strength;
  return params.strength * (1.0 + params.modulation_gain * (1.0 - ctx.mean_on_support()));
}

std::string_view to_string(DenoiserKind kind) {
  switch (kind) {
    case DenoiserKind::Identity:
      return "identity";
    case DenoiserKind::Tv:
      return "tv";
    case DenoiserKind::DctSoft:
      return "dct-soft";
    case DenoiserKind::Oracle:
      return "oracle";
  }
  return "unknown";
}

DenoiserKind parse_denoiser_kind(std::string_view name) {
  if (name == "identity") return DenoiserKind::Identity;
  if (name == "tv") return DenoiserKind::Tv;
  if (name == "dct-soft") return DenoiserKind::DctSoft;
  if (name == "oracle") return DenoiserKind::Oracle;
  throw ConfigError(fmt::format("unknown denoiser '{}'", name));
}

KSpace ImageDomainDenoiser::denoise(const KSpace& z, const SeverityContext& ctx,
                                    const DenoiserParams& params) const {
  params.validate();
  const double strength = effective_strength(params, ctx);
  KSpace out(z.coils(), z.height(), z.width());
  for (std::size_t c = 0; c < z.coils(); ++c) {
    const ComplexImage img = ifft2c_plane(z.plane_image(c));
    out.set_plane(c, fft2c_plane(denoise_image(img, strength, params)));
  }
  return out;
}

KSpace IdentityDenoiser::denoise(const KSpace& z, const SeverityContext&, const DenoiserParams&) const {
  return z;
}

ComplexImage TvDenoiser::denoise_image(const ComplexImage& img, double strength,
                                       const DenoiserParams& params) const {
  return tv_denoise(img, strength, params.inner_iterations);
}

ComplexImage DctSoftDenoiser::denoise_image(const ComplexImage& img, double strength,
                                            const DenoiserParams&) const {
  return soft_threshold_denoise(img, strength);
}

KSpace OracleDenoiser::denoise(const KSpace& z, const SeverityContext&, const DenoiserParams&) const {
  if (!z.same_shape(truth_)) throw ShapeError("oracle denoiser: input shape differs from ground truth");
  return truth_;
}

std::unique_ptr<Denoiser> make_denoiser(DenoiserKind kind, const KSpace* truth) {
  switch (kind) {
    case DenoiserKind::Identity:
      return std::make_unique<IdentityDenoiser>();
    case DenoiserKind::Tv:
      return std::make_unique<TvDenoiser>();
    case DenoiserKind::DctSoft:
      return std::make_unique<DctSoftDenoiser>();
    case DenoiserKind::Oracle:
      if (truth == nullptr) throw ConfigError("oracle denoiser requires ground-truth k-space");
      return std::make_unique<OracleDenoiser>(*truth);
  }
  throw ConfigError("unknown denoiser kind");
}

namespace {

// Forward-difference gradient with a Neumann boundary, and the divergence
// (its negative adjoint).
void gradient(const std::vector<double>& u, std::size_t h, std::size_t w, std::vector<double>& gx,
              std::vector<double>& gy) {
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      gx[i] = c + 1 < w ? u[i + 1] - u[i] : 0.0;
      gy[i] = r + 1 < h ? u[i + w] - u[i] : 0.0;
    }
  }
}

void divergence(const std::vector<double>& px, const std::vector<double>& py, std::size_t h, std::size_t w,
                std::vector<double>& div) {
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      double d = 0.0;
      if (c + 1 < w) d += px[i];
      if (c > 0) d -= px[i - 1];
      if (r + 1 < h) d += py[i];
      if (r > 0) d -= py[i - w];
      div[i] = d;
    }
  }
}

double total_variation(const std::vector<double>& u, std::size_t h, std::size_t w) {
  std::vector<double> gx(u.size());
  std::vector<double> gy(u.size());
  gradient(u, h, w, gx, gy);
  double tv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) tv += std::hypot(gx[i], gy[i]);
  return tv;
}

// Projected gradient on the dual field. The primal iterate f - lambda div p is
// not monotone in the objective, so the lowest-energy iterate seen so far is kept
// (starting from f itself).
class DualTvSolver {
 public:
  DualTvSolver(std::vector<double> f, std::size_t h, std::size_t w, double lambda)
      : f_(std::move(f)), h_(h), w_(w), lambda_(lambda), px_(f_.size(), 0.0), py_(f_.size(), 0.0),
        div_(f_.size(), 0.0), gx_(f_.size()), gy_(f_.size()), g_(f_.size()), u_(f_.size()), best_(f_),
        best_energy_(lambda_ * total_variation(f_, h_, w_)) {}

  void step() {
    constexpr double kStep = 0.125;
    divergence(px_, py_, h_, w_, div_);
    for (std::size_t i = 0; i < g_.size(); ++i) g_[i] = div_[i] - f_[i] / lambda_;
    gradient(g_, h_, w_, gx_, gy_);
    for (std::size_t i = 0; i < g_.size(); ++i) {
      const double qx = px_[i] + kStep * gx_[i];
      const double qy = py_[i] + kStep * gy_[i];
      const double scale = std::max(1.0, std::hypot(qx, qy));
      px_[i] = qx / scale;
      py_[i] = qy / scale;
    }
    divergence(px_, py_, h_, w_, div_);
    double fidelity = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) {
      u_[i] = f_[i] - lambda_ * div_[i];
      fidelity += (u_[i] - f_[i]) * (u_[i] - f_[i]);
    }
    const double energy = 0.5 * fidelity + lambda_ * total_variation(u_, h_, w_);
    if (energy <= best_energy_) {
      best_energy_ = energy;
      best_ = u_;
    }
  }

  const std::vector<double>& primal() const { return best_; }

 private:
  std::vector<double> f_;
  std::size_t h_;
  std::size_t w_;
  double lambda_;
  std::vector<double> px_, py_, div_, gx_, gy_, g_, u_, best_;
  double best_energy_;
};

std::vector<double> real_part(const ComplexImage& img) {
  std::vector<double> v(img.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = img.data()[i].real();
  return v;
}

std::vector<double> imag_part(const ComplexImage& img) {
  std::vector<double> v(img.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = img.data()[i].imag();
  return v;
}

ComplexImage combine(const std::vector<double>& re, const std::vector<double>& im, std::size_t h, std::size_t w) {
  ComplexImage out(h, w);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = Complex(re[i], im[i]);
  return out;
}

void check_tv_args(const ComplexImage& img, double lambda, int iterations) {
  if (img.size() == 0) throw DimensionError("tv_denoise: empty image");
  if (!(lambda > 0.0)) throw ConfigError("tv_denoise: lambda must be positive");
  if (iterations < 1) throw ConfigError("tv_denoise: at least one iteration is required");
}

}  // namespace

double tv_objective(const ComplexImage& u, const ComplexImage& f, double lambda) {
  if (!u.same_shape(f)) throw ShapeError("tv_objective: shape mismatch");
  double fidelity = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) fidelity += std::norm(u.data()[i] - f.data()[i]);
  return 0.5 * fidelity + lambda * (total_variation(real_part(u), u.height(), u.width()) +
                                    total_variation(imag_part(u), u.height(), u.width()));
}

ComplexImage tv_denoise(const ComplexImage& img, double lambda, int iterations) {
  check_tv_args(img, lambda, iterations);
  DualTvSolver re(real_part(img), img.height(), img.width(), lambda);
  DualTvSolver im(imag_part(img), img.height(), img.width(), lambda);
  for (int k = 0; k < iterations; ++k) {
    re.step();
    im.step();
  }
  return combine(re.primal(), im.primal(), img.height(), img.width());
}

TvTrace tv_denoise_traced(const ComplexImage& img, double lambda, int iterations) {
  check_tv_args(img, lambda, iterations);
  DualTvSolver re(real_part(img), img.height(), img.width(), lambda);
  DualTvSolver im(imag_part(img), img.height(), img.width(), lambda);
  TvTrace trace;
  trace.objective.push_back(tv_objective(img, img, lambda));
  for (int k = 0; k < iterations; ++k) {
    re.step();
    im.step();
    trace.image = combine(re.primal(), im.primal(), img.height(), img.width());
    trace.objective.push_back(tv_objective(trace.image, img, lambda));
  }
  return trace;
}

ComplexImage soft_threshold_denoise(const ComplexImage& img, double lambda) {
  if (img.size() == 0) throw DimensionError("soft_threshold_denoise: empty image");
  if (lambda < 0.0) throw ConfigError("soft_threshold_denoise: lambda must be nonnegative");
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  auto re = real_part(img);
  auto im = imag_part(img);
  dct2_ortho(re, h, w);
  dct2_ortho(im, h, w);
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double mag = std::hypot(re[i], im[i]);
    const double keep = mag > lambda ? 1.0 - lambda / mag : 0.0;
    re[i] *= keep;
    im[i] *= keep;
  }
  idct2_ortho(re, h, w);
  idct2_ortho(im, h, w);
  return combine(re, im, h, w);
}

}  // namespace pdac
