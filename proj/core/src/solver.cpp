#include "pdac/solver.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "pdac/errors.hpp"

namespace pdac {

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::Oracle:
      return "oracle";
    case PredictorKind::Heuristic:
      return "heuristic";
    case PredictorKind::Random:
      return "random";
  }
  return "unknown";
}

PredictorKind parse_predictor_kind(std::string_view name) {
  if (name == "oracle") return PredictorKind::Oracle;
  if (name == "heuristic") return PredictorKind::Heuristic;
  if (name == "random") return PredictorKind::Random;
  throw ConfigError(fmt::format("unknown predictor '{}'", name));
}

PdacConfig PdacConfig::with_schedule(BudgetSchedule schedule, double mu, double strength) {
  PdacConfig cfg;
  cfg.iterations = static_cast<int>(schedule.steps());
  cfg.mu.assign(schedule.budgets.size(), mu);
  cfg.strengths.assign(schedule.steps(), strength);
  cfg.schedule = std::move(schedule);
  return cfg;
}

void PdacConfig::validate() const {
  if (iterations < 0) throw ConfigError("iterations must be nonnegative");
  const auto t = static_cast<std::size_t>(iterations);
  if (schedule.budgets.size() != t + 1) {
    throw ConfigError(fmt::format("schedule has {} budgets, expected iterations + 1 = {}", schedule.budgets.size(),
                                  t + 1));
  }
  if (mu.size() != t + 1) {
    throw ConfigError(fmt::format("mu has {} entries, expected iterations + 1 = {}", mu.size(), t + 1));
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0)) throw ConfigError(fmt::format("mu[{}] must be positive, got {}", i, mu[i]));
  }
  if (strengths.size() != t) {
    throw ConfigError(fmt::format("lambda has {} entries, expected iterations = {}", strengths.size(), t));
  }
  for (int k = 1; k <= iterations; ++k) denoiser_params(k).validate();
  if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
}

DenoiserParams PdacConfig::denoiser_params(int t) const {
  return DenoiserParams{strengths.at(static_cast<std::size_t>(t - 1)), inner_iterations, modulation_gain};
}

KSpace data_consistency(const KSpace& z_prev, const CartesianMask& m_prev, const KSpace& ax, double mu_prev,
                        double mu_t) {
  if (!(mu_prev > 0.0) || !(mu_t > 0.0)) {
    throw ConfigError(fmt::format("data consistency weights must be positive (got {}, {})", mu_prev, mu_t));
  }
  if (!z_prev.same_shape(ax)) throw ShapeError("data_consistency: z_prev and A x differ in shape");
  if (m_prev.width() != z_prev.width()) throw ShapeError("data_consistency: mask width mismatch");

  KSpace out(z_prev.coils(), z_prev.height(), z_prev.width());
  for (std::size_t c = 0; c < out.coils(); ++c) {
    for (std::size_t r = 0; r < out.height(); ++r) {
      for (std::size_t j = 0; j < out.width(); ++j) {
        const double d = m_prev.sampled(j) ? 1.0 : 0.0;
        out(c, r, j) = (mu_prev * d * z_prev(c, r, j) + mu_t * ax(c, r, j)) / (mu_prev * d + mu_t);
      }
    }
  }
  return out;
}

namespace {

void check_inputs(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg, const CoilSensitivities* sens,
                  const KSpace* truth, bool needs_truth) {
  cfg.validate();
  if (y.coils() == 0 || y.height() == 0 || y.width() == 0) throw DimensionError("empty measurement");
  if (m0.width() != y.width()) throw ShapeError("acquisition mask width does not match k-space width");
  validate_schedule(cfg.schedule, y.width(), m0.budget());
  if (y.coils() > 1 && sens == nullptr) throw ConfigError("multi-coil data requires coil sensitivities");
  if (sens != nullptr && (sens->coils() != y.coils() || sens->height() != y.height() || sens->width() != y.width())) {
    throw ShapeError("coil sensitivities do not match the k-space shape");
  }
  if (needs_truth && truth == nullptr) {
    throw ConfigError("the oracle predictor and oracle denoiser require ground-truth k-space");
  }
  if (truth != nullptr && !truth->same_shape(y)) throw ShapeError("ground-truth k-space shape differs from y");
  for (std::size_t c = 0; c < y.coils(); ++c) {
    for (std::size_t r = 0; r < y.height(); ++r) {
      for (std::size_t j = 0; j < y.width(); ++j) {
        if (!m0.sampled(j) && y(c, r, j) != Complex{}) {
          throw ValidationError(fmt::format("measurement is not zero-filled at column {}", j));
        }
      }
    }
  }
}

void finish_report(ReconReport& report, const CoilSensitivities* sens, const KSpace* truth, double alpha,
                   const std::optional<double>& l_prob) {
  report.prob_loss = l_prob;
  if (truth != nullptr) {
    const ComplexImage gt = adjoint(*truth, sens);
    report.metrics = evaluate(report.final_image, gt, l_prob.value_or(0.0), alpha);
  }
}

}  // namespace

ReconReport pdac_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                             const CoilSensitivities* sens, const KSpace* truth) {
  if (cfg.denoiser == DenoiserKind::Oracle && truth == nullptr) {
    throw ConfigError("the oracle denoiser requires ground-truth k-space");
  }
  const auto denoiser = make_denoiser(cfg.denoiser, truth);
  return pdac_reconstruct(y, m0, cfg, *denoiser, sens, truth);
}

ReconReport pdac_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                             const Denoiser& denoiser, const CoilSensitivities* sens, const KSpace* truth) {
  check_inputs(y, m0, cfg, sens, truth,
               cfg.predictor == PredictorKind::Oracle || denoiser.kind() == DenoiserKind::Oracle);

  std::optional<ComplexImage> gt_image;
  if (truth != nullptr) gt_image = adjoint(*truth, sens);
  std::mt19937_64 rng(cfg.seed);

  ReconReport report;
  KSpace z = y;
  ComplexImage x = adjoint(y, sens);
  CartesianMask mask = m0;
  ConfidenceVector confidence = ConfidenceVector::ones(y.width());
  std::vector<ProbLossTerm> loss_terms;

  for (int t = 1; t <= cfg.iterations; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    // The mask m_t is chosen from the reconstruction of this iteration, so
    // the consistency anchor A x is taken on the support already trusted.
    const KSpace ax = degrade(encode(x, sens), mask);
    const KSpace z_dc = data_consistency(z, mask, ax, cfg.mu[ti - 1], cfg.mu[ti]);

    const SeverityContext ctx = severity_context(mask, confidence, t);
    const KSpace z_rec = denoiser.denoise(z_dc, ctx, cfg.denoiser_params(t));

    std::optional<OracleConfidence> scored;
    if (truth != nullptr) scored = oracle_confidence(z_rec, *truth);

    switch (cfg.predictor) {
      case PredictorKind::Oracle:
        confidence = scored->confidence;
        break;
      case PredictorKind::Heuristic:
        confidence = heuristic_confidence(z_dc, z_rec);
        break;
      case PredictorKind::Random:
        confidence = random_confidence(y.width(), rng);
        break;
    }

    mask = next_mask(mask, confidence, cfg.schedule.budgets[ti]);
    z = degrade(z_rec, mask);
    if (cfg.refresh_image) x = adjoint(z, sens);

    IterationRecord rec;
    rec.budget = mask.budget();
    rec.mask = mask;
    rec.mean_masked_confidence = severity_context(mask, confidence, t).mean_on_support();
    if (gt_image) rec.psnr = psnr(adjoint(z, sens), *gt_image);
    report.iterations.push_back(std::move(rec));

    if (scored) {
      for (auto j : scored->guarded_columns) report.guarded_columns.push_back(j);
      loss_terms.push_back(ProbLossTerm{mask, confidence, std::move(scored->squashed_error)});
    }
  }

  report.final_image = adjoint(z, sens);
  std::optional<double> l_prob;
  if (truth != nullptr) l_prob = prob_loss(loss_terms);
  finish_report(report, sens, truth, cfg.alpha, l_prob);
  return report;
}

KSpace hqs_data_consistency(const ComplexImage& x_prev, const KSpace& y, const CartesianMask& m0, double mu,
                            const CoilSensitivities* sens) {
  if (!(mu > 0.0)) throw ConfigError(fmt::format("HQS weight must be positive, got {}", mu));
  if (m0.width() != y.width()) throw ShapeError("hqs_data_consistency: mask width mismatch");
  const KSpace fx = encode(x_prev, sens);
  if (!fx.same_shape(y)) throw ShapeError("hqs_data_consistency: encoded image and measurement differ in shape");
  KSpace out(y.coils(), y.height(), y.width());
  for (std::size_t c = 0; c < y.coils(); ++c) {
    for (std::size_t r = 0; r < y.height(); ++r) {
      for (std::size_t j = 0; j < y.width(); ++j) {
        const double d = m0.sampled(j) ? 1.0 : 0.0;
        out(c, r, j) = (d * y(c, r, j) + mu * fx(c, r, j)) / (d + mu);
      }
    }
  }
  return out;
}

ReconReport hqs_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                            const CoilSensitivities* sens, const KSpace* truth) {
  if (cfg.denoiser == DenoiserKind::Oracle && truth == nullptr) {
    throw ConfigError("the oracle denoiser requires ground-truth k-space");
  }
  const auto denoiser = make_denoiser(cfg.denoiser, truth);
  return hqs_reconstruct(y, m0, cfg, *denoiser, sens, truth);
}

ReconReport hqs_reconstruct(const KSpace& y, const CartesianMask& m0, const PdacConfig& cfg,
                            const Denoiser& denoiser, const CoilSensitivities* sens, const KSpace* truth) {
  // HQS never consults a predictor; only an oracle denoiser needs the truth.
  check_inputs(y, m0, cfg, sens, truth, denoiser.kind() == DenoiserKind::Oracle);

  std::optional<ComplexImage> gt_image;
  if (truth != nullptr) gt_image = adjoint(*truth, sens);

  ReconReport report;
  ComplexImage x = adjoint(y, sens);
  const ConfidenceVector trusted = ConfidenceVector::ones(y.width());
  for (int t = 1; t <= cfg.iterations; ++t) {
    const KSpace z = hqs_data_consistency(x, y, m0, cfg.mu[static_cast<std::size_t>(t)], sens);
    const SeverityContext ctx = severity_context(m0, trusted, t);
    x = adjoint(denoiser.denoise(z, ctx, cfg.denoiser_params(t)), sens);

    IterationRecord rec;
    rec.budget = m0.budget();
    rec.mask = m0;
    rec.mean_masked_confidence = 1.0;
    if (gt_image) rec.psnr = psnr(x, *gt_image);
    report.iterations.push_back(std::move(rec));
  }
  report.final_image = std::move(x);
  finish_report(report, sens, truth, cfg.alpha, std::nullopt);
  return report;
}

ReconReport zero_filled_reconstruct(const KSpace& y, const CoilSensitivities* sens, const KSpace* truth,
                                    double alpha) {
  if (y.coils() > 1 && sens == nullptr) throw ConfigError("multi-coil data requires coil sensitivities");
  ReconReport report;
  report.final_image = adjoint(y, sens);
  finish_report(report, sens, truth, alpha, std::nullopt);
  return report;
}

}  // namespace pdac
