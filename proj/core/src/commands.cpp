#include "pdac/commands.hpp"

#include <fmt/format.h>

#include "pdac/errors.hpp"
#include "pdac/fft.hpp"

namespace pdac {

namespace fs = std::filesystem;

namespace {

fs::path input_dir(const RunConfig& cfg) { return cfg.input.empty() ? fs::path(cfg.out) : fs::path(cfg.input); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}'", dir.string()));
  }
}

double peak_magnitude(const ComplexImage& img) { return max_abs(img.data()); }

}  // namespace

Acquisition simulate(const RunConfig& cfg) {
  cfg.validate();
  Acquisition acq{shepp_logan(cfg.height, cfg.width), std::nullopt,
                  make_acquisition_mask(cfg.width, cfg.acceleration, cfg.center_fraction, cfg.seed), KSpace{}};
  const NoiseModel noise{cfg.noise_sigma, cfg.seed};
  if (cfg.coils > 1) {
    acq.sensitivities = synth_sensitivities(cfg.coils, cfg.height, cfg.width);
    acq.kspace = forward_multi(acq.ground_truth, *acq.sensitivities, acq.mask, noise);
  } else {
    acq.kspace = forward_single(acq.ground_truth, acq.mask, noise);
  }
  return acq;
}

ReconReport reconstruct(const Acquisition& acq, const RunConfig& cfg) {
  cfg.validate();
  const KSpace truth = acq.truth_kspace();
  switch (cfg.solver) {
    case SolverKind::ZeroFilled:
      return zero_filled_reconstruct(acq.kspace, acq.sens(), &truth, cfg.alpha);
    case SolverKind::Hqs:
      return hqs_reconstruct(acq.kspace, acq.mask, cfg.pdac_config(acq.mask.budget()), acq.sens(), &truth);
    case SolverKind::Pdac:
      return pdac_reconstruct(acq.kspace, acq.mask, cfg.pdac_config(acq.mask.budget()), acq.sens(), &truth);
  }
  throw ConfigError("unknown solver");
}

void save_acquisition(const Acquisition& acq, const fs::path& dir) {
  ensure_dir(dir);
  io::write_image(dir / files::kGroundTruth, acq.ground_truth);
  if (acq.sensitivities) io::write_ksp(dir / files::kSensitivities, acq.sensitivities->maps());
  io::write_mask(dir / files::kMask, acq.mask);
  io::write_ksp(dir / files::kKSpace, acq.kspace);
}

Acquisition load_acquisition(const fs::path& dir) {
  Acquisition acq;
  acq.ground_truth = io::read_image(dir / files::kGroundTruth);
  acq.mask = io::read_mask(dir / files::kMask);
  acq.kspace = KSpace(io::read_ksp(dir / files::kKSpace));
  if (fs::exists(dir / files::kSensitivities)) {
    acq.sensitivities = CoilSensitivities(io::read_ksp(dir / files::kSensitivities));
  }
  if (acq.kspace.coils() > 1 && !acq.sensitivities) {
    throw IoError(fmt::format("'{}' holds multi-coil k-space but no {}", dir.string(), files::kSensitivities));
  }
  if (acq.kspace.height() != acq.ground_truth.height() || acq.kspace.width() != acq.ground_truth.width()) {
    throw IoError("k-space and ground-truth shapes differ");
  }
  return acq;
}

Acquisition cmd_simulate(const RunConfig& cfg) {
  Acquisition acq = simulate(cfg);
  save_acquisition(acq, cfg.out);
  return acq;
}

ReconReport cmd_reconstruct(const RunConfig& cfg) {
  cfg.validate();
  const Acquisition acq = load_acquisition(input_dir(cfg));
  RunConfig effective = cfg;
  effective.height = acq.kspace.height();
  effective.width = acq.kspace.width();
  ReconReport report = reconstruct(acq, effective);

  const fs::path out(cfg.out);
  ensure_dir(out);
  io::write_pgm(out / files::kReconImage, report.final_image, peak_magnitude(acq.ground_truth));
  io::write_image(out / files::kRecon, report.final_image);
  io::write_file(out / files::kTrace, io::trace_csv(report));
  std::string metrics(io::kMetricsHeader);
  metrics += '\n';
  if (report.metrics) metrics += io::metrics_row(to_string(cfg.solver), *report.metrics, report.prob_loss) + '\n';
  io::write_file(out / files::kMetrics, metrics);
  return report;
}

MetricSet cmd_evaluate(const RunConfig& cfg) {
  cfg.validate();
  const fs::path in = input_dir(cfg);
  const ComplexImage recon = io::read_image(in / files::kRecon);
  const ComplexImage gt = io::read_image(in / files::kGroundTruth);
  const MetricSet m = evaluate(recon, gt, 0.0, cfg.alpha);
  const fs::path out(cfg.out);
  ensure_dir(out);
  io::write_file(out / files::kEvaluation,
                 fmt::format("{}\n{}\n", io::kMetricsHeader, io::metrics_row("evaluate", m, std::nullopt)));
  return m;
}

std::vector<io::AblationRow> run_ablation(const Acquisition& acq, const RunConfig& cfg) {
  std::vector<io::AblationRow> rows;
  for (auto shape : {ScheduleShape::CoarseToFine, ScheduleShape::Uniform, ScheduleShape::FineToCoarse}) {
    for (auto predictor : {PredictorKind::Oracle, PredictorKind::Heuristic, PredictorKind::Random}) {
      RunConfig cell = cfg;
      cell.solver = SolverKind::Pdac;
      cell.schedule = shape;
      cell.budgets.clear();
      cell.predictor = predictor;
      const ReconReport report = reconstruct(acq, cell);
      rows.push_back({shape, predictor, *report.metrics});
    }
  }
  return rows;
}

std::vector<io::AblationRow> cmd_ablate(const RunConfig& cfg) {
  const Acquisition acq = simulate(cfg);
  auto rows = run_ablation(acq, cfg);
  const fs::path out(cfg.out);
  ensure_dir(out);
  io::write_file(out / files::kAblation, io::ablation_csv(rows));
  return rows;
}

}  // namespace pdac
