#include "haarquench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "haarquench/concurrence.hpp"
#include "haarquench/gme.hpp"
#include "haarquench/states.hpp"

namespace haarquench {

namespace {

constexpr double kRangeSlack = 1e-6;
constexpr double kZeroThreshold = 1e-12;

std::string describe_location(std::uint64_t seed, std::size_t state, std::optional<std::size_t> config) {
  std::string out = "seed " + std::to_string(seed) + ", state " + std::to_string(state);
  if (config) out += ", disorder config " + std::to_string(*config);
  return out;
}

void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

// Population mean and standard deviation, summed in index order.
std::pair<double, double> moments(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

RawCoefficients draw_clean(const ExperimentConfig& config, std::size_t state, RunDiagnostics& diag) {
  RngStream rng(config.master_seed, clean_stream(state));
  for (;;) {
    RawCoefficients raw = haar_raw(config.n_qubits, rng);
    if (raw.norm() >= kMinRawNorm) return raw;
    ++diag.zero_vector_redraws;
  }
}

RawCoefficients draw_disordered(const ExperimentConfig& config, const RawCoefficients& base, std::size_t state,
                                std::size_t cfg, RunDiagnostics& diag) {
  RngStream rng(config.master_seed, disorder_stream(config, state, cfg));
  for (;;) {
    RawCoefficients raw = inject_disorder(base, config.targets, config.family, config.siqr, rng);
    if (raw.norm() >= kMinRawNorm) return raw;
    ++diag.zero_vector_redraws;
  }
}

// Evaluates the measure, re-raising failures with their schedule position.
double located_measure(const ExperimentConfig& config, const RawCoefficients& raw, std::size_t state,
                       std::optional<std::size_t> cfg, RunDiagnostics& diag) {
  try {
    return measure(config, raw.reals, &diag);
  } catch (const SolverFailure& e) {
    throw ComputationError(e.code(), e.what(), config.master_seed, state, cfg, e.problem());
  } catch (const Error& e) {
    throw ComputationError(e.code(), e.what(), config.master_seed, state, cfg, nullptr);
  }
}

void merge(RunDiagnostics& into, const RunDiagnostics& from) {
  into.evaluations += from.evaluations;
  into.loose_sdp_solves += from.loose_sdp_solves;
  into.zero_vector_redraws += from.zero_vector_redraws;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Per-state diagnostics are collected into slots and merged in index order.
RunDiagnostics merge_all(const std::vector<RunDiagnostics>& slots) {
  RunDiagnostics out;
  for (const auto& d : slots) merge(out, d);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_qubits != 2 && n_qubits != 3) config_error("n_qubits must be 2 or 3");
  if (n_states == 0) config_error("n_states must be positive");
  if (!(siqr > 0.0) || !std::isfinite(siqr)) config_error("siqr must be positive");
  if (noise_p && !(*noise_p >= 0.0 && *noise_p <= 1.0)) config_error("noise_p must lie in [0, 1]");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) config_error("bin_width must be positive");
  const double bins = range_max() / bin_width;
  if (std::abs(bins - std::round(bins)) > 1e-9 * bins)
    config_error("bin_width must divide the measure range [0, " + std::to_string(range_max()) + "] evenly");
  const std::size_t n_reals = std::size_t{2} << n_qubits;
  if (n_disorder_configs > 0 && targets.empty()) config_error("targets must be non-empty for a disordered run");
  for (std::size_t t : targets)
    if (t >= n_reals) config_error("target index " + std::to_string(t) + " out of range");
  auto sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) config_error("duplicate target index");
}

EntanglementHistogram histogram(std::span<const double> samples, double range_max, double bin_width) {
  if (!(range_max > 0.0) || !(bin_width > 0.0))
    throw Error(ErrorCode::InvalidArgument, "range and bin width must be positive");
  const auto bins = static_cast<std::size_t>(std::llround(range_max / bin_width));
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "bin width exceeds the range");

  EntanglementHistogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) h.bin_edges[k] = static_cast<double>(k) * bin_width;
  h.bin_edges[bins] = range_max;

  std::vector<std::size_t> counts(bins, 0);
  std::size_t zeros = 0;
  std::vector<double> clamped(samples.begin(), samples.end());
  for (double& v : clamped) {
    if (!std::isfinite(v) || v < -kRangeSlack || v > range_max + kRangeSlack)
      throw Error(ErrorCode::OutOfRange, "sample " + std::to_string(v) + " outside [0, " + std::to_string(range_max) + "]");
    v = std::clamp(v, 0.0, range_max);
    auto k = static_cast<std::size_t>(std::floor(v / bin_width));
    // v / bin_width can round up across an edge; the edge table decides.
    if (k >= bins) k = bins - 1;
    if (k > 0 && v < h.bin_edges[k]) --k;
    else if (k + 1 < bins && v >= h.bin_edges[k + 1]) ++k;
    ++counts[k];
    if (v < kZeroThreshold) ++zeros;
  }

  h.n_samples = clamped.size();
  h.percentages.resize(bins, 0.0);
  if (h.n_samples > 0) {
    const double n = static_cast<double>(h.n_samples);
    for (std::size_t k = 0; k < bins; ++k) h.percentages[k] = 100.0 * static_cast<double>(counts[k]) / n;
    h.zero_percentage = 100.0 * static_cast<double>(zeros) / n;
  }
  std::tie(h.mean, h.std) = moments(clamped);
  return h;
}

ComputationError::ComputationError(ErrorCode code, const std::string& what, std::uint64_t master_seed,
                                   std::size_t state_index, std::optional<std::size_t> config_index,
                                   std::shared_ptr<const sdp::SdpProblem> problem)
    : Error(code, what + " [" + describe_location(master_seed, state_index, config_index) + "]"),
      master_seed_(master_seed),
      state_index_(state_index),
      config_index_(config_index),
      problem_(std::move(problem)) {}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        failed = true;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t clean_stream(std::size_t state_index) noexcept { return state_index; }

std::uint64_t disorder_stream(const ExperimentConfig& config, std::size_t state_index,
                              std::size_t config_index) noexcept {
  return config.n_states + state_index * config.n_disorder_configs + config_index;
}

double measure(const ExperimentConfig& config, std::span<const double> raw, RunDiagnostics* diagnostics) {
  const PureState psi = normalize(RawCoefficients(config.n_qubits, {raw.begin(), raw.end()}));
  if (diagnostics) ++diagnostics->evaluations;
  if (config.n_qubits == 2) {
    if (!config.noise_p) return concurrence_pure(psi);
    return concurrence_mixed(with_white_noise(psi, *config.noise_p));
  }
  const GmeValue g = config.noise_p ? gme_monotone(with_white_noise(psi, *config.noise_p)) : gme_monotone_pure(psi);
  if (diagnostics && g.loose_tolerance) ++diagnostics->loose_sdp_solves;
  return g.value;
}

CleanResult run_clean(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  CleanResult out;
  out.values.resize(config.n_states);
  std::vector<RunDiagnostics> slots(config.n_states);
  std::atomic<std::size_t> done{0};
  parallel_for(config.n_states, options.workers, [&](std::size_t i) {
    const RawCoefficients raw = draw_clean(config, i, slots[i]);
    out.values[i] = located_measure(config, raw, i, std::nullopt, slots[i]);
    if (options.progress) options.progress(++done, config.n_states);
  });
  out.diagnostics = merge_all(slots);
  out.histogram = histogram(out.values, config.range_max(), config.bin_width);
  return out;
}

QuenchedResult run_quenched(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  if (config.n_disorder_configs == 0) config_error("a quenched run needs n_disorder_configs >= 1");
  QuenchedResult out;
  out.records.resize(config.n_states);
  std::vector<RunDiagnostics> slots(config.n_states);
  std::atomic<std::size_t> done{0};
  parallel_for(config.n_states, options.workers, [&](std::size_t i) {
    RunDiagnostics& diag = slots[i];
    const RawCoefficients base = draw_clean(config, i, diag);
    QuenchedRecord& rec = out.records[i];
    rec.state_index = i;
    rec.clean_entanglement = located_measure(config, base, i, std::nullopt, diag);
    // Average the measure over realizations, never the states.
    double sum = 0.0;
    for (std::size_t c = 0; c < config.n_disorder_configs; ++c)
      sum += located_measure(config, draw_disordered(config, base, i, c, diag), i, c, diag);
    rec.quenched_avg_entanglement = sum / static_cast<double>(config.n_disorder_configs);
    if (options.progress) options.progress(++done, config.n_states);
  });
  out.diagnostics = merge_all(slots);

  std::vector<double> clean(config.n_states), quenched(config.n_states);
  for (std::size_t i = 0; i < config.n_states; ++i) {
    clean[i] = out.records[i].clean_entanglement;
    quenched[i] = out.records[i].quenched_avg_entanglement;
  }
  out.clean = histogram(clean, config.range_max(), config.bin_width);
  out.quenched = histogram(quenched, config.range_max(), config.bin_width);
  return out;
}

std::vector<QuenchedResult> run_gamma_sweep(const ExperimentConfig& config, std::span<const double> gammas,
                                            const RunOptions& options) {
  if (config.family != DistributionFamily::Gaussian) config_error("the gamma sweep uses Gaussian disorder");
  if (config.targets.size() != 1 || config.targets[0] != 0) config_error("the gamma sweep targets the first coefficient only");
  std::vector<QuenchedResult> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    ExperimentConfig c = config;
    c.siqr = g;
    out.push_back(run_quenched(c, options));
  }
  return out;
}

double ConvergenceReport::delta_mean() const noexcept { return std::abs(full_mean - half_mean); }
double ConvergenceReport::delta_std() const noexcept { return std::abs(full_std - half_std); }

std::uint64_t half_run_seed(std::uint64_t master_seed) noexcept {
  // splitmix64 finalizer of the seed offset by a fixed constant
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ConvergenceReport convergence_check(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  ConvergenceReport r;
  r.significant_figures = config.n_qubits == 2 ? 3 : 2;
  r.tol_mean = std::pow(10.0, -r.significant_figures);
  r.tol_std = 2.0 * r.tol_mean;

  ExperimentConfig half = config;
  half.n_states = std::max<std::size_t>(1, config.n_states / 2);
  if (config.n_disorder_configs > 0) half.n_disorder_configs = std::max<std::size_t>(1, config.n_disorder_configs / 2);
  half.master_seed = half_run_seed(config.master_seed);

  auto stats = [&](const ExperimentConfig& c) {
    if (c.n_disorder_configs == 0) return run_clean(c, options).histogram;
    return run_quenched(c, options).quenched;
  };
  const EntanglementHistogram full_h = stats(config);
  const EntanglementHistogram half_h = stats(half);

  r.full_mean = full_h.mean;
  r.full_std = full_h.std;
  r.half_mean = half_h.mean;
  r.half_std = half_h.std;
  r.full_states = config.n_states;
  r.half_states = half.n_states;
  r.full_configs = config.n_disorder_configs;
  r.half_configs = half.n_disorder_configs;
  r.converged = r.delta_mean() < r.tol_mean && r.delta_std() < r.tol_std;
  return r;
}

}  // namespace haarquench
