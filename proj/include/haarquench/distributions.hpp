#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace haarquench {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output is a pure function of (key, counter); no hidden state.
namespace philox {
using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMultiplier0 = 0xD2511F53u;
inline constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
inline constexpr int kRounds = 10;

Counter generate(Counter counter, Key key) noexcept;
}  // namespace philox

/// A reproducible random stream. The sequence is fully determined by
/// (master_seed, stream_index): the seed is the Philox key, the stream
/// index fills the upper half of the counter and an internal block counter
/// fills the lower half.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
      : master_seed_(master_seed), stream_index_(stream_index) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t blocks_consumed() const noexcept { return block_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [2^-53, 1 - 2^-53].
  double uniform_open() noexcept;
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double standard_normal() noexcept;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::optional<double> spare_normal_;
};

enum class DistributionFamily { Gaussian, Uniform, CauchyLorentz };

std::string_view to_string(DistributionFamily family) noexcept;
/// Accepts "gaussian", "uniform", "cauchy_lorentz" (case-sensitive). Throws ConfigError.
DistributionFamily parse_family(std::string_view name);

/// Quartile of the standard normal, Phi^{-1}(3/4).
inline constexpr double kNormalQuartile = 0.674489750196081743;

/// Distribution parameterized by its center (mean or median) and its
/// semi-interquartile range, whatever the family.
struct DistributionSpec {
  DistributionFamily family = DistributionFamily::Gaussian;
  double center = 0.0;
  double siqr = 0.5;

  void validate() const;
};

/// Standard deviation of a normal distribution with the given SIQR.
double siqr_to_std_gaussian(double siqr);

/// x0 + siqr * tan(pi (F - 1/2)).
double cauchy_lorentz_quantile(double center, double siqr, double probability);

double sample(const DistributionSpec& spec, RngStream& rng);

/// (Q3 - Q1) / 2 with linearly interpolated quantiles (Hyndman-Fan type 7).
double empirical_siqr(std::span<const double> samples);

/// Linear-interpolation quantile of unsorted data, p in [0, 1].
double empirical_quantile(std::span<const double> samples, double p);

}  // namespace haarquench
