#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "haarquench/experiment.hpp"
#include "json.hpp"

namespace haarquench::cli {

enum class ExitCode : int {
  Ok = 0,
  ConfigError = 1,
  NumericalFailure = 2,
  NotConverged = 3,
  AcceptanceFailure = 4,
};

enum class PresetId {
  Fig1,
  Fig2Noisy2q,
  Fig3TwoParam,
  Fig4FourParam,
  Fig5GammaSweep,
  Fig6ThreeQubitPure,
  Fig7ThreeQubitNoisy,
};

std::string_view to_string(PresetId id) noexcept;
/// Throws ConfigError for unknown names.
PresetId parse_preset(std::string_view name);
std::vector<PresetId> all_presets();

/// One histogram of a preset. Quenched curves histogram the per-state
/// disorder averages; clean curves the per-state values.
struct Curve {
  std::string name;
  ExperimentConfig config;
  bool quenched = false;
};

struct Preset {
  std::string name;
  std::vector<Curve> curves;
  std::vector<std::string> assumptions;
};

Preset make_preset(PresetId id, std::uint64_t seed, double scale = 1.0);

/// n -> max(1, floor(n * scale)); zero disorder configs stay zero.
std::size_t scaled_count(std::size_t n, double scale);
ExperimentConfig apply_scale(ExperimentConfig config, double scale);

/// Flat `key = value` text, one entry per line; `#` starts a comment.
/// Keys: n_qubits, n_states, n_disorder_configs, disorder_family, siqr,
/// targets (comma separated indices or coefficient names), noise_p,
/// bin_width, master_seed. Unknown or repeated keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& config);

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// `bin_lower,bin_upper,percentage`, 17 significant digits.
void write_histogram_csv(std::ostream& out, const EntanglementHistogram& h);

/// An explicit seed wins, then HAARQUENCH_SEED, then the fallback.
std::uint64_t resolve_seed(std::optional<std::uint64_t> seed, std::uint64_t fallback = 0);

struct RunArgs {
  std::string target;  // preset name or config file path
  /// Overrides the config file's master_seed when set.
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  double scale = 1.0;
  std::filesystem::path out_dir = ".";
  bool quiet = false;
};

struct CheckArgs {
  std::string preset;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  double scale = 1.0;
};

struct AcceptanceArgs {
  std::filesystem::path report = "acceptance_report.txt";
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  double scale = 1.0;
  std::vector<int> criteria;  // empty = all
};

ExitCode cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
ExitCode cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err);
ExitCode cmd_acceptance(const AcceptanceArgs& args, std::ostream& out, std::ostream& err);

}  // namespace haarquench::cli
