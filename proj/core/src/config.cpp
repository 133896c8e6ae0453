#include "pdac/config.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "pdac/errors.hpp"
#include "pdac/io.hpp"

namespace pdac {

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Simulate:
      return "simulate";
    case RunMode::Reconstruct:
      return "reconstruct";
    case RunMode::Evaluate:
      return "evaluate";
    case RunMode::Ablate:
      return "ablate";
  }
  return "unknown";
}

RunMode parse_run_mode(std::string_view name) {
  if (name == "simulate") return RunMode::Simulate;
  if (name == "reconstruct") return RunMode::Reconstruct;
  if (name == "evaluate") return RunMode::Evaluate;
  if (name == "ablate") return RunMode::Ablate;
  throw ConfigError(fmt::format("unknown mode '{}'", name));
}

std::string_view to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::Pdac:
      return "pdac";
    case SolverKind::Hqs:
      return "hqs";
    case SolverKind::ZeroFilled:
      return "zero-filled";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "pdac") return SolverKind::Pdac;
  if (name == "hqs") return SolverKind::Hqs;
  if (name == "zero-filled") return SolverKind::ZeroFilled;
  throw ConfigError(fmt::format("unknown solver '{}'", name));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError(fmt::format("invalid value '{}' for key '{}': {}", value, key, why));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) bad_value(key, text, "not a number");
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number<T>(key, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  bad_value(key, text, "expected true or false");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
std::string format_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

// Wraps parse_* helpers that throw ConfigError without the key name.
template <typename F>
auto keyed(std::string_view key, std::string_view value, F&& f) {
  try {
    return f(value);
  } catch (const ConfigError& e) {
    bad_value(key, value, e.what());
  }
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "mode",     "height",          "width",           "coils",     "acceleration", "center_fraction",
      "schedule", "budgets",         "iterations",      "mu",        "lambda",       "denoiser",
      "inner_iterations", "modulation_gain", "predictor", "solver",   "noise_sigma",  "alpha",
      "refresh_image",    "input",           "out",       "seed"};
  return keys;
}

void apply_config_value(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "mode") {
    cfg.mode = keyed(key, value, parse_run_mode);
  } else if (key == "height") {
    cfg.height = parse_number<std::size_t>(key, value);
  } else if (key == "width") {
    cfg.width = parse_number<std::size_t>(key, value);
  } else if (key == "coils") {
    cfg.coils = parse_number<std::size_t>(key, value);
  } else if (key == "acceleration") {
    cfg.acceleration = parse_number<std::size_t>(key, value);
  } else if (key == "center_fraction") {
    cfg.center_fraction = parse_number<double>(key, value);
  } else if (key == "schedule") {
    cfg.schedule = keyed(key, value, parse_schedule_shape);
  } else if (key == "budgets") {
    cfg.budgets = parse_list<std::size_t>(key, value);
  } else if (key == "iterations") {
    cfg.iterations = parse_number<int>(key, value);
  } else if (key == "mu") {
    cfg.mu = parse_list<double>(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_list<double>(key, value);
  } else if (key == "denoiser") {
    cfg.denoiser = keyed(key, value, parse_denoiser_kind);
  } else if (key == "inner_iterations") {
    cfg.inner_iterations = parse_number<int>(key, value);
  } else if (key == "modulation_gain") {
    cfg.modulation_gain = parse_number<double>(key, value);
  } else if (key == "predictor") {
    cfg.predictor = keyed(key, value, parse_predictor_kind);
  } else if (key == "solver") {
    cfg.solver = keyed(key, value, parse_solver_kind);
  } else if (key == "noise_sigma") {
    cfg.noise_sigma = parse_number<double>(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_number<double>(key, value);
  } else if (key == "refresh_image") {
    cfg.refresh_image = parse_bool(key, value);
  } else if (key == "input") {
    cfg.input = std::string(value);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    apply_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  return parse_config(io::read_file(path), std::move(base));
}

std::string format_config_value(const RunConfig& cfg, std::string_view key) {
  if (key == "mode") return std::string(to_string(cfg.mode));
  if (key == "height") return std::to_string(cfg.height);
  if (key == "width") return std::to_string(cfg.width);
  if (key == "coils") return std::to_string(cfg.coils);
  if (key == "acceleration") return std::to_string(cfg.acceleration);
  if (key == "center_fraction") return format_double(cfg.center_fraction);
  if (key == "schedule") return std::string(to_string(cfg.schedule));
  if (key == "budgets") return format_list(cfg.budgets);
  if (key == "iterations") return std::to_string(cfg.iterations);
  if (key == "mu") return format_list(cfg.mu);
  if (key == "lambda") return format_list(cfg.lambda);
  if (key == "denoiser") return std::string(to_string(cfg.denoiser));
  if (key == "inner_iterations") return std::to_string(cfg.inner_iterations);
  if (key == "modulation_gain") return format_double(cfg.modulation_gain);
  if (key == "predictor") return std::string(to_string(cfg.predictor));
  if (key == "solver") return std::string(to_string(cfg.solver));
  if (key == "noise_sigma") return format_double(cfg.noise_sigma);
  if (key == "alpha") return format_double(cfg.alpha);
  if (key == "refresh_image") return cfg.refresh_image ? "true" : "false";
  if (key == "input") return cfg.input;
  if (key == "out") return cfg.out;
  if (key == "seed") return std::to_string(cfg.seed);
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

std::string format_config(const RunConfig& cfg) {
  std::string out;
  for (auto key : config_keys()) out += fmt::format("{} = {}\n", key, format_config_value(cfg, key));
  return out;
}

void RunConfig::validate() const {
  auto fail = [](std::string_view key, const std::string& why) {
    throw ConfigError(fmt::format("invalid value for key '{}': {}", key, why));
  };
  if (height < 8) fail("height", "must be at least 8");
  if (width < 8) fail("width", "must be at least 8");
  if (coils < 1) fail("coils", "must be at least 1");
  if (acceleration < 1 || acceleration > width) fail("acceleration", "must lie in [1, width]");
  if (!(center_fraction > 0.0 && center_fraction < 1.0)) fail("center_fraction", "must lie in (0, 1)");
  if (iterations < 0) fail("iterations", "must be nonnegative");
  if (!budgets.empty() && budgets.size() != static_cast<std::size_t>(iterations) + 1) {
    fail("budgets", "must list iterations + 1 values");
  }
  const auto t = static_cast<std::size_t>(iterations);
  if (mu.size() != 1 && mu.size() != t + 1) fail("mu", "must hold 1 or iterations + 1 values");
  for (double v : mu) {
    if (!(v > 0.0)) fail("mu", "weights must be positive");
  }
  if (lambda.size() != 1 && lambda.size() != t) fail("lambda", "must hold 1 or iterations values");
  for (double v : lambda) {
    if (!(v > 0.0)) fail("lambda", "strengths must be positive");
  }
  if (inner_iterations < 1) fail("inner_iterations", "must be at least 1");
  if (!(modulation_gain >= 0.0)) fail("modulation_gain", "must be nonnegative");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma", "must be nonnegative");
  if (!(alpha >= 0.0)) fail("alpha", "must be nonnegative");
  if (out.empty()) fail("out", "must not be empty");
}

BudgetSchedule RunConfig::budget_schedule(std::size_t m0_budget) const {
  if (!budgets.empty()) {
    BudgetSchedule s{budgets};
    return validate_schedule(s, width, m0_budget);
  }
  if (m0_budget == width) return BudgetSchedule{{width}};
  return make_schedule(width, m0_budget, static_cast<std::size_t>(iterations), schedule);
}

PdacConfig RunConfig::pdac_config(std::size_t m0_budget) const {
  PdacConfig cfg;
  cfg.schedule = budget_schedule(m0_budget);
  cfg.iterations = static_cast<int>(cfg.schedule.steps());
  const auto t = cfg.schedule.steps();
  // A fully sampled acquisition collapses the schedule to zero steps; lists
  // sized for the configured iteration count are then broadcast from their head.
  cfg.mu = mu.size() == t + 1 ? mu : std::vector<double>(t + 1, mu.front());
  cfg.strengths = lambda.size() == t ? lambda : std::vector<double>(t, lambda.front());
  cfg.denoiser = denoiser;
  cfg.inner_iterations = inner_iterations;
  cfg.modulation_gain = modulation_gain;
  cfg.predictor = predictor;
  cfg.seed = seed;
  cfg.refresh_image = refresh_image;
  cfg.alpha = alpha;
  return cfg;
}

}  // namespace pdac
