// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "pdac/commands.hpp"
#include "pdac/errors.hpp"
#include "pdac/fft.hpp"
#include "pdac/io.hpp"

namespace pdac {
namespace {

using testing::random_image;
using testing::random_kspace;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

// Desk-scale regression values: default 128 x 128 instance, seed 0, 8x,
// center fraction 0.04, T = 8, TV (lambda 0.01, 50 inner iterations), mu = 1.
constexpr double kFrozenTolerance = 0.01;
constexpr double kZeroFilledPsnr = 15.5584;
constexpr double kPdacPsnr = 15.2588;
constexpr double kHqsPsnr = 15.8330;
// Rows: coarse-to-fine, uniform, fine-to-coarse. Columns: oracle, heuristic, random.
constexpr double kAblationPsnr[3][3] = {
    {15.2588, 15.2971, 15.2845},
    {15.2052, 15.2292, 15.2420},
    {15.1617, 15.1665, 15.1803},
};

bool near_frozen(double value, double frozen) { return std::abs(value - frozen) <= kFrozenTolerance; }

Outcome fft_contract() {
  Outcome out;
  std::mt19937_64 rng(101);
  double worst_trip = 0.0;
  double worst_norm = 0.0;
  for (const auto [h, w] : {std::pair<std::size_t, std::size_t>{32, 32}, {33, 31}}) {
    for (int trial = 0; trial < 200; ++trial) {
      const ComplexImage x = random_image(h, w, rng);
      const KSpace k = fft2c(x);
      worst_trip = std::max(worst_trip, max_abs_diff(ifft2c(k).data(), x.data()));
      worst_norm = std::max(worst_norm, std::abs(norm2(k.data()) - norm2(x.data())) / norm2(x.data()));
    }
  }
  out.require(worst_trip <= 1e-10, fmt::format("round trip error {:.3g}", worst_trip));
  out.require(worst_norm <= 1e-10, fmt::format("Parseval error {:.3g}", worst_norm));
  out.detail = out.pass ? fmt::format("round trip {:.2g}, Parseval {:.2g}", worst_trip, worst_norm) : out.detail;
  return out;
}

double dc_objective(std::span<const Complex> z, std::span<const Complex> z_prev, const std::vector<double>& d,
                    std::span<const Complex> ax, double mu_prev, double mu_t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    acc += mu_prev * std::norm(z_prev[i] - d[i] * z[i]) + mu_t * std::norm(z[i] - ax[i]);
  }
  return acc;
}

Outcome data_consistency_oracle() {
  Outcome out;
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int lowered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t h = dim(rng);
    const std::size_t w = dim(rng);
    std::vector<std::uint8_t> bits(w);
    for (auto& b : bits) b = static_cast<std::uint8_t>(g(rng) > 0.0);
    bits[std::uniform_int_distribution<std::size_t>(0, w - 1)(rng)] = 1;
    const CartesianMask m_prev(bits);
    const KSpace z_prev = degrade(random_kspace(1, h, w, rng), m_prev);
    const KSpace ax = random_kspace(1, h, w, rng);
    const double mu_prev = weight(rng);
    const double mu_t = weight(rng);

    // Dense normal equations (mu_prev D^T D + mu_t I) z = mu_prev D^T z_prev + mu_t ax.
    const std::size_t n = h * w;
    std::vector<double> d(n);
    std::vector<Complex> a(n * n, 0.0);
    std::vector<Complex> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = m_prev.sampled(i % w) ? 1.0 : 0.0;
      a[i * n + i] = mu_prev * d[i] * d[i] + mu_t;
      b[i] = mu_prev * d[i] * z_prev.data()[i] + mu_t * ax.data()[i];
    }
    const auto dense = testing::dense_solve(a, b);
    const KSpace z = data_consistency(z_prev, m_prev, ax, mu_prev, mu_t);
    worst = std::max(worst, max_abs_diff(z.data(), dense) / max_abs(dense));

    const double best = dc_objective(z.data(), z_prev.data(), d, ax.data(), mu_prev, mu_t);
    for (int k = 0; k < 100; ++k) {
      std::vector<Complex> moved(z.data().begin(), z.data().end());
      std::vector<Complex> delta(n);
      for (auto& e : delta) e = Complex(g(rng), g(rng));
      const double scale = 1e-3 / norm2(delta);
      for (std::size_t i = 0; i < n; ++i) moved[i] += scale * delta[i];
      if (dc_objective(moved, z_prev.data(), d, ax.data(), mu_prev, mu_t) < best) ++lowered;
    }
  }
  out.require(worst <= 1e-8, fmt::format("relative mismatch {:.3g}", worst));
  out.require(lowered == 0, fmt::format("{} perturbations lowered the objective", lowered));
  if (out.pass) out.detail = fmt::format("max relative mismatch {:.2g}, 10000 perturbations", worst);
  return out;
}

Outcome mask_invariants() {
  Outcome out;
  std::mt19937_64 rng(303);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = std::uniform_int_distribution<std::size_t>(16, 400)(rng);
    const std::size_t accel = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const auto m0 = make_acquisition_mask(w, accel, 0.04, rng());
    const std::size_t steps = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(12, w - m0.budget()))(rng);
    const auto shape = static_cast<ScheduleShape>(trial % 3);
    const BudgetSchedule s = validate_schedule(make_schedule(w, m0.budget(), steps, shape), w, m0.budget());
    // Confidences on a coarse grid so that ties are common.
    std::uniform_int_distribution<int> level(0, 4);
    CartesianMask m = m0;
    for (std::size_t t = 1; t < s.budgets.size(); ++t) {
      ConfidenceVector p{std::vector<double>(w)};
      for (auto& v : p.probs) v = 0.25 * level(rng);
      const CartesianMask next = next_mask(m, p, s.budgets[t]);
      if (!m.subset_of(next) || next.budget() != s.budgets[t]) ++violations;
      m = next;
    }
    if (!m.is_full()) ++violations;
  }
  out.require(violations == 0, fmt::format("{} violations", violations));
  if (out.pass) out.detail = "100 sequences nested, on budget, full at T";
  return out;
}

struct Instance {
  ComplexImage gt;
  std::optional<CoilSensitivities> sens;
  CartesianMask m0;
  KSpace truth;
  KSpace y;
  const CoilSensitivities* s() const { return sens ? &*sens : nullptr; }
};

Instance phantom_instance(std::size_t n, std::size_t coils) {
  Instance inst;
  inst.gt = shepp_logan(n, n);
  if (coils > 1) inst.sens = synth_sensitivities(coils, n, n);
  inst.m0 = make_acquisition_mask(n, 8, 0.04, 0);
  inst.truth = encode(inst.gt, inst.s());
  inst.y = degrade(inst.truth, inst.m0);
  return inst;
}

PdacConfig oracle_config(const Instance& inst) {
  PdacConfig cfg = PdacConfig::with_schedule(
      make_schedule(inst.m0.width(), inst.m0.budget(), 8, ScheduleShape::CoarseToFine), 1.0, 0.01);
  cfg.denoiser = DenoiserKind::Oracle;
  cfg.predictor = PredictorKind::Oracle;
  return cfg;
}

Outcome exact_recovery() {
  Outcome out;
  const Instance inst = phantom_instance(64, 1);
  const PdacConfig cfg = oracle_config(inst);
  const double pdac_nmse = pdac_reconstruct(inst.y, inst.m0, cfg, nullptr, &inst.truth).metrics->nmse;
  const double hqs_nmse = hqs_reconstruct(inst.y, inst.m0, cfg, nullptr, &inst.truth).metrics->nmse;
  out.require(pdac_nmse <= 1e-16, fmt::format("PDAC NMSE {:.3g}", pdac_nmse));
  out.require(hqs_nmse <= 1e-16, fmt::format("HQS NMSE {:.3g}", hqs_nmse));
  if (out.pass) out.detail = fmt::format("NMSE PDAC {:.2g}, HQS {:.2g}", pdac_nmse, hqs_nmse);
  return out;
}

Outcome loss_identities() {
  Outcome out;
  std::mt19937_64 rng(505);
  std::vector<ProbLossTerm> trace;
  for (int t = 0; t < 8; ++t) {
    const OracleConfidence oc = oracle_confidence(random_kspace(2, 6, 16, rng), random_kspace(2, 6, 16, rng));
    trace.push_back({make_acquisition_mask(16, 2, 0.125, rng()), oc.confidence, oc.squashed_error});
  }
  const double l_prob = prob_loss(trace);
  out.require(l_prob == 0.0, fmt::format("prob_loss at the target is {:.3g}", l_prob));

  const Instance inst = phantom_instance(64, 1);
  const ReconReport rep = pdac_reconstruct(inst.y, inst.m0, oracle_config(inst), nullptr, &inst.truth);
  out.require(rep.prob_loss && *rep.prob_loss == 0.0, "oracle run reported a nonzero prob_loss");

  const double hand = 0.375 + 0.01 * 2.5;
  out.require(std::abs(total_loss(0.375, 2.5, 0.01) - hand) <= 1e-12, "total_loss arithmetic");
  out.require(std::abs(total_loss(1.0, 2.0, kDefaultProbLossWeight) - 1.02) <= 1e-12, "default alpha");
  const MetricSet m = evaluate(shepp_logan(16, 16), phantom_instance(16, 1).gt, 4.0, 0.01);
  out.require(std::abs(m.l_total - (m.l_rec + 0.04)) <= 1e-12, "evaluate l_total");
  if (out.pass) out.detail = "prob_loss 0 at target, total_loss matches hand arithmetic";
  return out;
}

struct DeskScale {
  RunConfig cfg;
  Acquisition acq;
};

const DeskScale& desk_scale() {
  static const DeskScale instance = [] {
    DeskScale d;
    d.cfg = RunConfig{};
    d.acq = simulate(d.cfg);
    return d;
  }();
  return instance;
}

Outcome desk_scale_end_to_end() {
  Outcome out;
  const DeskScale& d = desk_scale();
  RunConfig cfg = d.cfg;
  cfg.solver = SolverKind::ZeroFilled;
  const double zf = reconstruct(d.acq, cfg).metrics->psnr;
  cfg.solver = SolverKind::Pdac;
  const double pdac = reconstruct(d.acq, cfg).metrics->psnr;
  cfg.solver = SolverKind::Hqs;
  const double hqs = reconstruct(d.acq, cfg).metrics->psnr;
  out.detail = fmt::format("ZF {:.4f} dB, PDAC {:.4f} dB, HQS {:.4f} dB", zf, pdac, hqs);
  out.require(pdac >= zf + 4.0, fmt::format("PDAC gain over ZF is {:.3f} dB (< 4)", pdac - zf));
  out.require(pdac >= hqs, fmt::format("PDAC trails HQS by {:.3f} dB", hqs - pdac));
  out.require(near_frozen(zf, kZeroFilledPsnr), fmt::format("ZF drifted from {:.3f}", kZeroFilledPsnr));
  out.require(near_frozen(pdac, kPdacPsnr), fmt::format("PDAC drifted from {:.3f}", kPdacPsnr));
  out.require(near_frozen(hqs, kHqsPsnr), fmt::format("HQS drifted from {:.3f}", kHqsPsnr));
  return out;
}

Outcome ablation_direction() {
  Outcome out;
  const DeskScale& d = desk_scale();
  const auto rows = run_ablation(d.acq, d.cfg);
  double grid[3][3] = {};
  for (const auto& row : rows) {
    grid[static_cast<int>(row.schedule)][static_cast<int>(row.predictor)] = row.metrics.psnr;
  }
  std::string values;
  for (int s = 0; s < 3; ++s) {
    for (int p = 0; p < 3; ++p) {
      values += fmt::format("{}{:.4f}", (s == 0 && p == 0) ? "" : (p == 0 ? " | " : " "), grid[s][p]);
      out.require(near_frozen(grid[s][p], kAblationPsnr[s][p]),
                  fmt::format("cell ({}, {}) drifted from {:.3f}", to_string(static_cast<ScheduleShape>(s)),
                              to_string(static_cast<PredictorKind>(p)), kAblationPsnr[s][p]));
    }
  }
  constexpr int kOracle = static_cast<int>(PredictorKind::Oracle);
  constexpr int kRandom = static_cast<int>(PredictorKind::Random);
  constexpr int kC2f = static_cast<int>(ScheduleShape::CoarseToFine);
  constexpr int kUni = static_cast<int>(ScheduleShape::Uniform);
  constexpr int kF2c = static_cast<int>(ScheduleShape::FineToCoarse);
  out.require(grid[kC2f][kOracle] >= grid[kUni][kOracle], "coarse-to-fine < uniform");
  out.require(grid[kUni][kOracle] >= grid[kF2c][kOracle], "uniform < fine-to-coarse");
  out.require(grid[kC2f][kOracle] >= grid[kC2f][kRandom],
              fmt::format("oracle predictor trails random by {:.3f} dB", grid[kC2f][kRandom] - grid[kC2f][kOracle]));
  out.detail = "PSNR [c2f | uniform | f2c] x [oracle heuristic random]: " + values +
               (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome serialization_fuzz() {
  Outcome out;
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_int_distribution<std::uint64_t> raw;
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ComplexStack s(dim(rng), dim(rng), dim(rng));
    for (auto& v : s.data()) {
      double re;
      double im;
      do {
        re = std::bit_cast<double>(raw(rng));
        im = std::bit_cast<double>(raw(rng));
      } while (!std::isfinite(re) || !std::isfinite(im));
      v = Complex(re, im);
    }
    const std::string ksp = io::encode_ksp(s);
    if (io::encode_ksp(io::decode_ksp(ksp)) != ksp) ++mismatches;

    std::string line(dim(rng) * 13, '0');
    for (auto& c : line) c = (raw(rng) & 1) ? '1' : '0';
    line[0] = '1';
    line += '\n';
    if (io::encode_mask(io::decode_mask(line)) != line) ++mismatches;

    const std::string cfg = format_config(testing::random_config(rng));
    if (format_config(parse_config(cfg)) != cfg) ++mismatches;
  }
  out.require(mismatches == 0, fmt::format("{} round trips changed bytes", mismatches));
  if (out.pass) out.detail = "3000 round trips byte-identical";
  return out;
}

Outcome multi_coil_consistency() {
  Outcome out;
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t coils = std::size_t{1} << (1 + trial % 3);
    const std::size_t h = std::uniform_int_distribution<std::size_t>(8, 40)(rng);
    const std::size_t w = std::uniform_int_distribution<std::size_t>(8, 40)(rng);
    const ComplexImage x = random_image(h, w, rng);
    const auto s = synth_sensitivities(coils, h, w);
    const KSpace y = forward_multi(x, s, CartesianMask::full(w), {});
    worst = std::max(worst, max_abs_diff(coil_combine(y, s).data(), x.data()));
  }
  out.require(worst <= 1e-10, fmt::format("combine error {:.3g}", worst));
  double worst_nmse = 0.0;
  for (std::size_t coils : {2u, 4u, 8u}) {
    const Instance inst = phantom_instance(64, coils);
    const ReconReport rep = pdac_reconstruct(inst.y, inst.m0, oracle_config(inst), inst.s(), &inst.truth);
    worst_nmse = std::max(worst_nmse, rep.metrics->nmse);
  }
  out.require(worst_nmse <= 1e-16, fmt::format("multi-coil PDAC NMSE {:.3g}", worst_nmse));
  if (out.pass) out.detail = fmt::format("combine error {:.2g}, NMSE {:.2g}", worst, worst_nmse);
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace pdac

int main(int argc, char** argv) {
  using namespace pdac;
  const std::vector<Criterion> criteria{
      {1, "FFT contract", 5.0, fft_contract},
      {2, "data-consistency oracle equivalence", 10.0, data_consistency_oracle},
      {3, "mask-machinery invariants", 5.0, mask_invariants},
      {4, "exact recovery with oracle denoiser", 5.0, exact_recovery},
      {5, "loss identities", 5.0, loss_identities},
      {6, "desk-scale end-to-end", 60.0, desk_scale_end_to_end},
      {7, "ablation direction", 300.0, ablation_direction},
      {8, "serialization fuzz", 10.0, serialization_fuzz},
      {9, "multi-coil consistency", 30.0, multi_coil_consistency},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) o.require(false, fmt::format("runtime over {:.0f} s", c.budget_seconds));
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %d (%s) %.2fs: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
