// Command-line front end: simulate | reconstruct | evaluate | ablate.
//
// Every config key is also a flag (--key value) that overrides the value read
// from --config. The subcommand sets the mode; without one the mode comes from
// the config file. Errors are reported as a single line with a nonzero exit.

#include <cstdio>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pdac/commands.hpp"
#include "pdac/config.hpp"
#include "pdac/errors.hpp"

namespace {

void print_summary(const pdac::RunConfig& cfg) {
  switch (cfg.mode) {
    case pdac::RunMode::Simulate:
      fmt::print("simulated {}x{} ({} coil{}) into {}\n", cfg.height, cfg.width, cfg.coils, cfg.coils == 1 ? "" : "s",
                 cfg.out);
      break;
    default:
      break;
  }
}

int run(const pdac::RunConfig& cfg) {
  switch (cfg.mode) {
    case pdac::RunMode::Simulate: {
      const auto acq = pdac::cmd_simulate(cfg);
      print_summary(cfg);
      fmt::print("mask budget {} of {} columns\n", acq.mask.budget(), acq.mask.width());
      break;
    }
    case pdac::RunMode::Reconstruct: {
      const auto report = pdac::cmd_reconstruct(cfg);
      if (report.metrics) {
        fmt::print("{}: psnr {} ssim {} nmse {}\n", pdac::to_string(cfg.solver),
                   pdac::io::format_metric(report.metrics->psnr), pdac::io::format_metric(report.metrics->ssim),
                   pdac::io::format_metric(report.metrics->nmse));
      }
      break;
    }
    case pdac::RunMode::Evaluate: {
      const auto m = pdac::cmd_evaluate(cfg);
      fmt::print("psnr {} ssim {} nmse {}\n", pdac::io::format_metric(m.psnr), pdac::io::format_metric(m.ssim),
                 pdac::io::format_metric(m.nmse));
      break;
    }
    case pdac::RunMode::Ablate: {
      const auto rows = pdac::cmd_ablate(cfg);
      fmt::print("{}", pdac::io::ablation_csv(rows));
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive divide-and-conquer MRI reconstruction"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::optional<std::string> config_path;
  bool dump_config = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");

  std::map<std::string, std::optional<std::string>> overrides;
  for (auto key : pdac::config_keys()) {
    if (key == "mode") continue;
    auto& slot = overrides[std::string(key)];
    app.add_option(fmt::format("--{}", key), slot, fmt::format("override config key '{}'", key));
  }

  app.add_subcommand("simulate", "simulate a phantom acquisition");
  app.add_subcommand("reconstruct", "reconstruct a simulated acquisition");
  app.add_subcommand("evaluate", "score recon.ksp against ground_truth.ksp");
  app.add_subcommand("ablate", "schedule x predictor comparison grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "pdac: error: %s\n", e.what());
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    pdac::RunConfig cfg;
    if (config_path) cfg = pdac::load_config(*config_path, cfg);
    for (const auto& [key, value] : overrides) {
      if (value) pdac::apply_config_value(cfg, key, *value);
    }
    if (!app.get_subcommands().empty()) {
      cfg.mode = pdac::parse_run_mode(app.get_subcommands().front()->get_name());
    } else if (!config_path && !dump_config) {
      throw pdac::ConfigError("a subcommand (simulate, reconstruct, evaluate, ablate) is required");
    }
    cfg.validate();
    if (dump_config) {
      fmt::print("{}", pdac::format_config(cfg));
      return 0;
    }
    return run(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pdac: error: %s\n", e.what());
    return 1;
  }
}
