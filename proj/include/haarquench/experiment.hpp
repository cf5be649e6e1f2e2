#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "haarquench/distributions.hpp"
#include "haarquench/error.hpp"
#include "haarquench/sdp.hpp"

namespace haarquench {

/// Bumped whenever the mapping from (seed, state, config) to RNG streams changes.
inline constexpr int kSeedScheduleVersion = 1;

struct ExperimentConfig {
  int n_qubits = 2;
  std::size_t n_states = 1000;
  std::size_t n_disorder_configs = 0;  // 0 = clean only
  DistributionFamily family = DistributionFamily::Gaussian;
  double siqr = 0.5;
  std::vector<std::size_t> targets{0};
  std::optional<double> noise_p;
  double bin_width = 0.02;
  std::uint64_t master_seed = 0;

  /// Upper end of the measure's range: 1 for concurrence, 1/2 for the GME monotone.
  double range_max() const noexcept { return n_qubits == 2 ? 1.0 : 0.5; }
  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct EntanglementHistogram {
  std::vector<double> bin_edges;    // bins + 1 edges
  std::vector<double> percentages;  // relative frequency, sums to 100
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t n_samples = 0;
  /// Percentage of samples that are exactly zero (below 1e-12), i.e. states
  /// the measure classifies as unentangled. Distinct from the first bin.
  double zero_percentage = 0.0;
};

/// Left-closed, right-open bins over [0, range_max]; the last bin is closed.
/// Samples within 1e-6 outside the range are clamped to it; anything further
/// out throws OutOfRange.
EntanglementHistogram histogram(std::span<const double> samples, double range_max, double bin_width);

struct QuenchedRecord {
  std::size_t state_index = 0;
  double clean_entanglement = 0.0;
  double quenched_avg_entanglement = 0.0;
};

/// Counters describing how the values were obtained.
struct RunDiagnostics {
  std::size_t evaluations = 0;
  std::size_t loose_sdp_solves = 0;  // GME solves accepted at the looser 1e-7 tolerance
  std::size_t zero_vector_redraws = 0;
};

struct CleanResult {
  EntanglementHistogram histogram;
  std::vector<double> values;  // per state, in state order
  RunDiagnostics diagnostics;
};

struct QuenchedResult {
  EntanglementHistogram clean;     // the base states of this run
  EntanglementHistogram quenched;  // per-state disorder averages
  std::vector<QuenchedRecord> records;
  RunDiagnostics diagnostics;
};

/// A measure evaluation failed. Records where in the seed schedule it
/// happened; for SDP failures the offending problem is attached.
class ComputationError : public Error {
 public:
  ComputationError(ErrorCode code, const std::string& what, std::uint64_t master_seed, std::size_t state_index,
                   std::optional<std::size_t> config_index, std::shared_ptr<const sdp::SdpProblem> problem);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::size_t state_index() const noexcept { return state_index_; }
  std::optional<std::size_t> config_index() const noexcept { return config_index_; }
  const std::shared_ptr<const sdp::SdpProblem>& problem() const noexcept { return problem_; }

 private:
  std::uint64_t master_seed_;
  std::size_t state_index_;
  std::optional<std::size_t> config_index_;
  std::shared_ptr<const sdp::SdpProblem> problem_;
};

struct RunOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
  /// Called from worker threads with the number of completed states.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs body(i) for i in [0, n) on a pool of threads. Every index runs at most
/// once; after a failure no new indices are started and the exception of the
/// lowest failing index is rethrown, so the outcome does not depend on
/// scheduling.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

/// Stream layout: state i draws its raw coefficients from stream i; its
/// disorder configuration c draws from stream n_states + i * n_configs + c.
std::uint64_t clean_stream(std::size_t state_index) noexcept;
std::uint64_t disorder_stream(const ExperimentConfig& config, std::size_t state_index,
                              std::size_t config_index) noexcept;

/// Concurrence (two qubits) or GME monotone (three qubits) of the normalized
/// raw vector, with white noise applied when the config asks for it.
double measure(const ExperimentConfig& config, std::span<const double> raw, RunDiagnostics* diagnostics = nullptr);

CleanResult run_clean(const ExperimentConfig& config, const RunOptions& options = {});
QuenchedResult run_quenched(const ExperimentConfig& config, const RunOptions& options = {});
/// One quenched run per siqr value, in input order, sharing base states and
/// disorder streams.
std::vector<QuenchedResult> run_gamma_sweep(const ExperimentConfig& config, std::span<const double> gammas,
                                            const RunOptions& options = {});

struct ConvergenceReport {
  int significant_figures = 3;
  double tol_mean = 0.0;
  double tol_std = 0.0;
  double full_mean = 0.0, full_std = 0.0;
  double half_mean = 0.0, half_std = 0.0;
  std::size_t full_states = 0, half_states = 0;
  std::size_t full_configs = 0, half_configs = 0;
  bool converged = false;

  double delta_mean() const noexcept;
  double delta_std() const noexcept;
};

/// Seed of the half-size rerun used by convergence_check.
std::uint64_t half_run_seed(std::uint64_t master_seed) noexcept;

/// Reruns with half the states and half the disorder configurations on an
/// independent seed and compares the headline statistics (the quenched ones
/// when the config has disorder). Precision target: 3 significant figures
/// for two qubits, 2 for three; tolerances are 10^-s for the mean and
/// 2 * 10^-s for the standard deviation.
ConvergenceReport convergence_check(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace haarquench
