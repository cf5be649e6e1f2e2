#include "haarquench/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "haarquench/acceptance.hpp"
#include "haarquench/gme.hpp"
#include "haarquench/states.hpp"

namespace haarquench::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::pair<PresetId, std::string_view>, 7> kPresetNames{{
    {PresetId::Fig1, "fig1"},
    {PresetId::Fig2Noisy2q, "fig2_noisy2q"},
    {PresetId::Fig3TwoParam, "fig3_twoparam"},
    {PresetId::Fig4FourParam, "fig4_fourparam"},
    {PresetId::Fig5GammaSweep, "fig5_gamma_sweep"},
    {PresetId::Fig6ThreeQubitPure, "fig6_3q_pure"},
    {PresetId::Fig7ThreeQubitNoisy, "fig7_3q_noisy"},
}};

constexpr std::array<std::string_view, 9> kConfigKeys{
    "n_qubits", "n_states", "n_disorder_configs", "disorder_family", "siqr",
    "targets",  "noise_p",  "bin_width",          "master_seed",
};

constexpr std::array<DistributionFamily, 3> kFamilies{
    DistributionFamily::Gaussian, DistributionFamily::Uniform, DistributionFamily::CauchyLorentz};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) config_error("bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::size_t parse_target(std::string_view token, int n_qubits) {
  if (!token.empty() && std::isdigit(static_cast<unsigned char>(token.front())))
    return parse_number<std::size_t>("targets", token);
  const std::size_t n_reals = std::size_t{2} << n_qubits;
  for (std::size_t k = 0; k < n_reals; ++k)
    if (coefficient_name(n_qubits, k) == token) return k;
  config_error("unknown coefficient '" + std::string(token) + "' for " + std::to_string(n_qubits) + " qubits");
}

ExperimentConfig base_config(int n_qubits, std::uint64_t seed) {
  ExperimentConfig c;
  c.n_qubits = n_qubits;
  c.master_seed = seed;
  c.siqr = 0.5;
  c.bin_width = 0.02;
  if (n_qubits == 2) {
    c.n_states = 1'000'000;
    c.n_disorder_configs = 50;
  } else {
    c.n_states = 500;
    c.n_disorder_configs = 10;
  }
  return c;
}

Curve clean_curve(ExperimentConfig c, std::string name = "clean") {
  c.n_disorder_configs = 0;
  if (c.n_qubits == 3) c.n_states = 2000;
  return {std::move(name), std::move(c), false};
}

Curve quenched_curve(ExperimentConfig c, DistributionFamily f, std::vector<std::size_t> targets, std::string name = {}) {
  c.family = f;
  c.targets = std::move(targets);
  if (name.empty()) name = std::string(to_string(f));
  return {std::move(name), std::move(c), true};
}

ordered_json histogram_json(const EntanglementHistogram& h) {
  ordered_json j;
  j["mean"] = h.mean;
  j["std"] = h.std;
  j["n_samples"] = h.n_samples;
  j["zero_percentage"] = h.zero_percentage;
  return j;
}

ordered_json diagnostics_json(const RunDiagnostics& d) {
  ordered_json j;
  j["evaluations"] = d.evaluations;
  j["loose_sdp_solves"] = d.loose_sdp_solves;
  j["zero_vector_redraws"] = d.zero_vector_redraws;
  return j;
}

std::filesystem::path dump_problem(const std::filesystem::path& dir, const ComputationError& e) {
  std::string name = "sdp_failure_state" + std::to_string(e.state_index());
  if (e.config_index()) name += "_config" + std::to_string(*e.config_index());
  const auto path = dir / (name + ".txt");
  std::ofstream f(path);
  sdp::write_problem(f, *e.problem());
  return path;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) config_error("cannot write " + path.string());
  f << text;
  if (!f) config_error("failed writing " + path.string());
}

Preset resolve_run_target(const RunArgs& args, std::uint64_t seed, std::optional<std::string>& config_file) {
  for (const auto& [id, name] : kPresetNames)
    if (name == args.target) return make_preset(id, seed, args.scale);
  if (!std::filesystem::is_regular_file(args.target))
    config_error("'" + args.target + "' is neither a preset nor a readable config file");
  config_file = args.target;
  ExperimentConfig c = apply_scale(load_config(args.target), args.scale);
  if (args.seed) c.master_seed = *args.seed;
  Preset p;
  p.name = "config";
  if (c.n_disorder_configs == 0) {
    p.curves.push_back({"clean", c, false});
  } else {
    ExperimentConfig clean = c;
    clean.n_disorder_configs = 0;
    p.curves.push_back({"clean", clean, false});
    p.curves.push_back({std::string(to_string(c.family)), c, true});
  }
  return p;
}

}  // namespace

std::string_view to_string(PresetId id) noexcept {
  for (const auto& [k, name] : kPresetNames)
    if (k == id) return name;
  return "unknown";
}

PresetId parse_preset(std::string_view name) {
  for (const auto& [id, n] : kPresetNames)
    if (n == name) return id;
  std::string known;
  for (const auto& [id, n] : kPresetNames) known += (known.empty() ? "" : ", ") + std::string(n);
  config_error("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<PresetId> all_presets() {
  std::vector<PresetId> out;
  for (const auto& [id, n] : kPresetNames) out.push_back(id);
  return out;
}

std::size_t scaled_count(std::size_t n, double scale) {
  if (n == 0) return 0;
  const double v = std::floor(static_cast<double>(n) * scale);
  return v < 1.0 ? 1 : static_cast<std::size_t>(v);
}

ExperimentConfig apply_scale(ExperimentConfig config, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) config_error("scale must be positive");
  config.n_states = scaled_count(config.n_states, scale);
  config.n_disorder_configs = scaled_count(config.n_disorder_configs, scale);
  return config;
}

Preset make_preset(PresetId id, std::uint64_t seed, double scale) {
  Preset p;
  p.name = std::string(to_string(id));
  const std::vector<std::size_t> one{0}, two{0, 2}, four{0, 2, 4, 6};
  const std::string gamma_note =
      "disorder siqr 1/2 assumed for the noisy experiments, whose text does not restate it";

  auto families = [&](const ExperimentConfig& base, const std::vector<std::size_t>& targets) {
    p.curves.push_back(clean_curve(base));
    for (auto f : kFamilies) p.curves.push_back(quenched_curve(base, f, targets));
  };

  switch (id) {
    case PresetId::Fig1:
      families(base_config(2, seed), one);
      break;
    case PresetId::Fig2Noisy2q:
      for (double noise : {0.9, 0.8}) {
        ExperimentConfig c = base_config(2, seed);
        c.noise_p = noise;
        const std::string tag = "_p" + short_double(noise);
        p.curves.push_back(clean_curve(c, "clean" + tag));
        p.curves.push_back(quenched_curve(c, DistributionFamily::CauchyLorentz, one, "cauchy_lorentz" + tag));
      }
      p.assumptions.push_back(gamma_note);
      break;
    case PresetId::Fig3TwoParam:
      families(base_config(2, seed), two);
      break;
    case PresetId::Fig4FourParam:
      families(base_config(2, seed), four);
      break;
    case PresetId::Fig5GammaSweep: {
      const ExperimentConfig c = base_config(2, seed);
      p.curves.push_back(clean_curve(c));
      for (double g : {0.3, 0.4, 0.5, 0.6, 0.7}) {
        Curve q = quenched_curve(c, DistributionFamily::Gaussian, one, "gaussian_g" + short_double(g));
        q.config.siqr = g;
        p.curves.push_back(std::move(q));
      }
      break;
    }
    case PresetId::Fig6ThreeQubitPure:
      families(base_config(3, seed), four);
      p.assumptions.push_back("desk scale: 2000 clean states and 500 base states x 10 disorder configurations "
                              "instead of 20000 x 50");
      break;
    case PresetId::Fig7ThreeQubitNoisy:
      for (double noise : {0.9, 0.8}) {
        ExperimentConfig c = base_config(3, seed);
        c.noise_p = noise;
        const std::string tag = "_p" + short_double(noise);
        p.curves.push_back(clean_curve(c, "clean" + tag));
        p.curves.push_back(quenched_curve(c, DistributionFamily::CauchyLorentz, four, "cauchy_lorentz" + tag));
      }
      p.assumptions.push_back("state and configuration counts are not stated for the noisy three-qubit runs; "
                              "the pure three-qubit desk-scale counts are reused");
      p.assumptions.push_back(gamma_note);
      break;
  }
  for (auto& c : p.curves) c.config = apply_scale(c.config, scale);
  if (scale != 1.0) p.assumptions.push_back("sample counts scaled by " + short_double(scale));
  return p;
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
      config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!values.emplace(key, value).second)
      config_error("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
  }

  ExperimentConfig c;
  if (auto it = values.find("n_qubits"); it != values.end()) c.n_qubits = parse_number<int>(it->first, it->second);
  if (auto it = values.find("n_states"); it != values.end())
    c.n_states = parse_number<std::size_t>(it->first, it->second);
  if (auto it = values.find("n_disorder_configs"); it != values.end())
    c.n_disorder_configs = parse_number<std::size_t>(it->first, it->second);
  if (auto it = values.find("disorder_family"); it != values.end()) c.family = parse_family(it->second);
  if (auto it = values.find("siqr"); it != values.end()) c.siqr = parse_number<double>(it->first, it->second);
  if (auto it = values.find("noise_p"); it != values.end()) {
    if (it->second == "none") c.noise_p.reset();
    else c.noise_p = parse_number<double>(it->first, it->second);
  }
  if (auto it = values.find("bin_width"); it != values.end())
    c.bin_width = parse_number<double>(it->first, it->second);
  if (auto it = values.find("master_seed"); it != values.end())
    c.master_seed = parse_number<std::uint64_t>(it->first, it->second);
  if (auto it = values.find("targets"); it != values.end()) {
    c.targets.clear();
    std::string_view rest = it->second;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view tok = trim(rest.substr(0, comma));
      if (tok.empty()) config_error("empty entry in targets");
      c.targets.push_back(parse_target(tok, c.n_qubits));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) config_error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n_qubits = " << c.n_qubits << '\n';
  out << "n_states = " << c.n_states << '\n';
  out << "n_disorder_configs = " << c.n_disorder_configs << '\n';
  out << "disorder_family = " << to_string(c.family) << '\n';
  out << "siqr = " << format_double(c.siqr) << '\n';
  out << "targets = ";
  for (std::size_t k = 0; k < c.targets.size(); ++k) out << (k ? "," : "") << c.targets[k];
  out << '\n';
  out << "noise_p = " << (c.noise_p ? format_double(*c.noise_p) : "none") << '\n';
  out << "bin_width = " << format_double(c.bin_width) << '\n';
  out << "master_seed = " << c.master_seed << '\n';
  return out.str();
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["n_qubits"] = c.n_qubits;
  j["n_states"] = c.n_states;
  j["n_disorder_configs"] = c.n_disorder_configs;
  j["disorder_family"] = std::string(to_string(c.family));
  j["siqr"] = c.siqr;
  j["targets"] = c.targets;
  j["noise_p"] = c.noise_p ? ordered_json(*c.noise_p) : ordered_json(nullptr);
  j["bin_width"] = c.bin_width;
  j["master_seed"] = c.master_seed;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) config_error("config echo must be a JSON object");
  for (const auto& [key, v] : j.items())
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
      config_error("unknown key '" + key + "' in config echo");
  try {
    ExperimentConfig c;
    c.n_qubits = j.at("n_qubits").get<int>();
    c.n_states = j.at("n_states").get<std::size_t>();
    c.n_disorder_configs = j.at("n_disorder_configs").get<std::size_t>();
    c.family = parse_family(j.at("disorder_family").get<std::string>());
    c.siqr = j.at("siqr").get<double>();
    c.targets = j.at("targets").get<std::vector<std::size_t>>();
    if (!j.at("noise_p").is_null()) c.noise_p = j.at("noise_p").get<double>();
    c.bin_width = j.at("bin_width").get<double>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.validate();
    return c;
  } catch (const json::exception& e) {
    config_error(std::string("malformed config echo: ") + e.what());
  }
}

void write_histogram_csv(std::ostream& out, const EntanglementHistogram& h) {
  out << "bin_lower,bin_upper,percentage\n";
  for (std::size_t k = 0; k < h.percentages.size(); ++k)
    out << format_double(h.bin_edges[k]) << ',' << format_double(h.bin_edges[k + 1]) << ','
        << format_double(h.percentages[k]) << '\n';
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed, std::uint64_t fallback) {
  if (seed) return *seed;
  if (const char* env = std::getenv("HAARQUENCH_SEED"); env && *env)
    return parse_number<std::uint64_t>("HAARQUENCH_SEED", trim(env));
  return fallback;
}

ExitCode cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  std::filesystem::path dir = args.out_dir;
  try {
    std::optional<std::string> config_file;
    const Preset preset = resolve_run_target(args, resolve_seed(args.seed), config_file);
    const std::uint64_t seed = preset.curves.front().config.master_seed;
    std::filesystem::create_directories(dir);

    ordered_json summary;
    summary["preset"] = config_file ? ordered_json(nullptr) : ordered_json(preset.name);
    summary["config_file"] = config_file ? ordered_json(*config_file) : ordered_json(nullptr);
    summary["master_seed"] = seed;
    summary["scale"] = args.scale;
    summary["seed_schedule_version"] = kSeedScheduleVersion;
    summary["curves"] = ordered_json::array();

    RunOptions opts;
    opts.workers = args.workers;
    for (const Curve& curve : preset.curves) {
      ordered_json entry;
      entry["name"] = curve.name;
      entry["kind"] = curve.quenched ? "quenched" : "clean";
      entry["config"] = config_to_json(curve.config);
      const std::string csv = curve.name + ".csv";
      std::ostringstream body;
      const EntanglementHistogram* h = nullptr;
      QuenchedResult q;
      CleanResult c;
      if (curve.quenched) {
        q = run_quenched(curve.config, opts);
        h = &q.quenched;
        entry["statistics"] = histogram_json(q.quenched);
        entry["base_clean_statistics"] = histogram_json(q.clean);
        entry["diagnostics"] = diagnostics_json(q.diagnostics);
      } else {
        c = run_clean(curve.config, opts);
        h = &c.histogram;
        entry["statistics"] = histogram_json(c.histogram);
        entry["diagnostics"] = diagnostics_json(c.diagnostics);
      }
      write_histogram_csv(body, *h);
      write_text(dir / csv, body.str());
      entry["histogram_csv"] = csv;
      summary["curves"].push_back(std::move(entry));
      if (!args.quiet) {
        char line[160];
        std::snprintf(line, sizeof line, "%-22s mean %.4f  std %.4f  (%zu samples)\n", curve.name.c_str(), h->mean,
                      h->std, h->n_samples);
        out << line;
      }
    }
    summary["assumptions"] = preset.assumptions;
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    if (!args.quiet) out << "wrote " << (dir / "summary.json").string() << '\n';
    return ExitCode::Ok;
  } catch (const ComputationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    if (e.problem()) {
      try {
        err << "sdp problem dump: " << dump_problem(dir, e).string() << '\n';
      } catch (const std::exception& dump_error) {
        err << "could not write sdp problem dump: " << dump_error.what() << '\n';
      }
    }
    return ExitCode::NumericalFailure;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? ExitCode::ConfigError : ExitCode::NumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return ExitCode::ConfigError;
  }
}

ExitCode cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Preset preset = make_preset(parse_preset(args.preset), resolve_seed(args.seed), args.scale);
    RunOptions opts;
    opts.workers = args.workers;
    bool all = true;
    for (const Curve& curve : preset.curves) {
      const ConvergenceReport r = convergence_check(curve.config, opts);
      all = all && r.converged;
      char line[256];
      std::snprintf(line, sizeof line,
                    "%-22s %s  mean %.5f vs %.5f (|d| %.2e, tol %.0e)  std %.5f vs %.5f (|d| %.2e, tol %.0e)\n",
                    curve.name.c_str(), r.converged ? "converged    " : "NOT converged", r.full_mean, r.half_mean,
                    r.delta_mean(), r.tol_mean, r.full_std, r.half_std, r.delta_std(), r.tol_std);
      out << line;
    }
    return all ? ExitCode::Ok : ExitCode::NotConverged;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? ExitCode::ConfigError : ExitCode::NumericalFailure;
  }
}

ExitCode cmd_acceptance(const AcceptanceArgs& args, std::ostream& out, std::ostream& err) {
  try {
    acceptance::AcceptanceOptions opts;
    opts.seed = resolve_seed(args.seed, acceptance::kDefaultSeed);
    opts.scale = args.scale;
    opts.workers = args.workers;
    opts.criteria = args.criteria;
    opts.log = [&err](const std::string& msg) { err << msg << '\n'; };
    const acceptance::AcceptanceReport report = acceptance::run_acceptance(opts);
    const std::string text = report.format();
    if (args.report.has_parent_path()) std::filesystem::create_directories(args.report.parent_path());
    write_text(args.report, text);
    out << report.summary_lines();
    return report.all_pass() ? ExitCode::Ok : ExitCode::AcceptanceFailure;
  } catch (const ComputationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return ExitCode::NumericalFailure;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? ExitCode::ConfigError : ExitCode::NumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return ExitCode::ConfigError;
  }
}

}  // namespace haarquench::cli
