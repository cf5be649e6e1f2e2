#include "haarquench/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "haarquench/error.hpp"

namespace haarquench {

namespace philox {

namespace {
inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}
}  // namespace

Counter generate(Counter ctr, Key key) noexcept {
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMultiplier0, ctr[0], hi0, lo0);
    mulhilo(kMultiplier1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

}  // namespace philox

std::uint64_t RngStream::next_u64() noexcept {
  if (buffered_ == 0) {
    const philox::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(stream_index_),
                              static_cast<std::uint32_t>(stream_index_ >> 32)};
    const philox::Key key{static_cast<std::uint32_t>(master_seed_),
                          static_cast<std::uint32_t>(master_seed_ >> 32)};
    const auto out = philox::generate(ctr, key);
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
    ++block_;
  }
  return buffer_[static_cast<std::size_t>(2 - buffered_--)];
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() noexcept {
  return std::clamp(uniform(), 0x1.0p-53, 1.0 - 0x1.0p-53);
}

double RngStream::standard_normal() noexcept {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::string_view to_string(DistributionFamily family) noexcept {
  switch (family) {
    case DistributionFamily::Gaussian: return "gaussian";
    case DistributionFamily::Uniform: return "uniform";
    case DistributionFamily::CauchyLorentz: return "cauchy_lorentz";
  }
  return "unknown";
}

DistributionFamily parse_family(std::string_view name) {
  if (name == "gaussian") return DistributionFamily::Gaussian;
  if (name == "uniform") return DistributionFamily::Uniform;
  if (name == "cauchy_lorentz") return DistributionFamily::CauchyLorentz;
  throw Error(ErrorCode::ConfigError, "unknown distribution family '" + std::string(name) + "'");
}

void DistributionSpec::validate() const {
  if (!(siqr > 0.0) || !std::isfinite(siqr))
    throw Error(ErrorCode::NonPositive, "siqr must be positive and finite");
  if (!std::isfinite(center)) throw Error(ErrorCode::InvalidArgument, "center must be finite");
}

double siqr_to_std_gaussian(double siqr) {
  if (!(siqr > 0.0)) throw Error(ErrorCode::NonPositive, "siqr must be positive");
  return siqr / kNormalQuartile;
}

double cauchy_lorentz_quantile(double center, double siqr, double probability) {
  return center + siqr * std::tan(std::numbers::pi * (probability - 0.5));
}

double sample(const DistributionSpec& spec, RngStream& rng) {
  switch (spec.family) {
    case DistributionFamily::Gaussian:
      return spec.center + siqr_to_std_gaussian(spec.siqr) * rng.standard_normal();
    case DistributionFamily::Uniform:
      // support [center - 2 siqr, center + 2 siqr]
      return spec.center + 2.0 * spec.siqr * (2.0 * rng.uniform() - 1.0);
    case DistributionFamily::CauchyLorentz:
      for (;;) {
        const double x = cauchy_lorentz_quantile(spec.center, spec.siqr, rng.uniform_open());
        if (std::isfinite(x)) return x;
      }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown distribution family");
}

double empirical_quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw Error(ErrorCode::TooFewSamples, "quantile of empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double empirical_siqr(std::span<const double> samples) {
  if (samples.size() < 4) throw Error(ErrorCode::TooFewSamples, "need at least 4 samples");
  return 0.5 * (empirical_quantile(samples, 0.75) - empirical_quantile(samples, 0.25));
}

}  // namespace haarquench
