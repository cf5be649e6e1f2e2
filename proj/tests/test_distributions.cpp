#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "haarquench/distributions.hpp"
#include "haarquench/error.hpp"

using namespace haarquench;

namespace {

std::vector<double> draw(const DistributionSpec& spec, std::uint64_t seed, std::size_t n) {
  RngStream rng(seed, 0);
  std::vector<double> out(n);
  for (auto& x : out) x = sample(spec, rng);
  return out;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_SUITE("distributions") {
  TEST_CASE("Philox4x32-10 known-answer vectors") {
    using philox::generate;
    CHECK(generate({0, 0, 0, 0}, {0, 0}) == philox::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          philox::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          philox::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }

  TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
      const auto x = a.next_u64();
      CHECK(x == b.next_u64());
      seen.insert(x);
      seen.insert(c.next_u64());
      seen.insert(d.next_u64());
    }
    CHECK(seen.size() == 300);
    CHECK(a.blocks_consumed() == 50);
  }

  TEST_CASE("uniform ranges") {
    RngStream rng(1, 0);
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform();
      CHECK_UNARY(u >= 0.0);
      CHECK_UNARY(u < 1.0);
      const double v = rng.uniform_open();
      CHECK_UNARY(v > 0.0);
      CHECK_UNARY(v < 1.0);
    }
  }

  TEST_CASE("standard normal moments") {
    RngStream rng(2, 0);
    std::vector<double> v(200000);
    for (auto& x : v) x = rng.standard_normal();
    CHECK(std::abs(mean_of(v)) < 0.01);
    CHECK(std::abs(std_of(v) - 1.0) < 0.01);
    CHECK(std::abs(empirical_siqr(v) - kNormalQuartile) < 0.01);
  }

  TEST_CASE("Gaussian width from SIQR") {
    CHECK(siqr_to_std_gaussian(0.6744897501960817) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(siqr_to_std_gaussian(0.5) == doctest::Approx(0.741301109252801).epsilon(1e-14));
    CHECK_THROWS_AS(siqr_to_std_gaussian(0.0), Error);
  }

  TEST_CASE("Cauchy-Lorentz quantiles") {
    CHECK(cauchy_lorentz_quantile(0.3, 0.5, 0.5) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(cauchy_lorentz_quantile(0.3, 0.5, 0.75) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(cauchy_lorentz_quantile(0.3, 0.5, 0.25) == doctest::Approx(-0.2).epsilon(1e-14));
  }

  TEST_CASE("every family has the requested centre and SIQR") {
    for (auto family : {DistributionFamily::Gaussian, DistributionFamily::Uniform, DistributionFamily::CauchyLorentz}) {
      CAPTURE(to_string(family));
      const DistributionSpec spec{family, 0.25, 0.5};
      const auto v = draw(spec, 3, 200000);
      CHECK(std::abs(empirical_quantile(v, 0.5) - 0.25) < 0.01);
      CHECK(std::abs(empirical_siqr(v) - 0.5) < 0.01);
    }
  }

  TEST_CASE("Gaussian and uniform moments") {
    const auto g = draw({DistributionFamily::Gaussian, 1.0, 0.5}, 4, 200000);
    CHECK(std::abs(mean_of(g) - 1.0) < 0.01);
    CHECK(std::abs(std_of(g) - 0.741301109252801) < 0.01);
    const auto u = draw({DistributionFamily::Uniform, 1.0, 0.5}, 5, 200000);
    CHECK(*std::min_element(u.begin(), u.end()) >= 0.0);
    CHECK(*std::max_element(u.begin(), u.end()) <= 2.0);
    CHECK(std::abs(mean_of(u) - 1.0) < 0.01);
    CHECK(std::abs(std_of(u) - 1.0 / std::sqrt(3.0)) < 0.01);
  }

  TEST_CASE("Cauchy-Lorentz tail") {
    const auto v = draw({DistributionFamily::CauchyLorentz, 0.0, 1.0}, 6, 200000);
    const auto beyond = std::count_if(v.begin(), v.end(), [](double x) { return std::abs(x) > 10.0; });
    // P(|X| > 10) = 1 - 2 atan(10) / pi
    const double expected = 1.0 - 2.0 * std::atan(10.0) / std::acos(-1.0);
    CHECK(std::abs(static_cast<double>(beyond) / 200000.0 - expected) < 0.003);
  }

  TEST_CASE("empirical SIQR of a small sample") {
    const std::vector<double> v{8, 3, 1, 6, 2, 7, 5, 4};
    CHECK(empirical_siqr(v) == doctest::Approx(1.75));
    CHECK(empirical_quantile(v, 0.0) == 1.0);
    CHECK(empirical_quantile(v, 1.0) == 8.0);
    const std::vector<double> few{1, 2, 3};
    try {
      empirical_siqr(few);
      FAIL("expected TooFewSamples");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooFewSamples);
    }
  }

  TEST_CASE("spec validation and family names") {
    CHECK_THROWS_AS((DistributionSpec{DistributionFamily::Gaussian, 0.0, 0.0}.validate()), Error);
    CHECK_THROWS_AS((DistributionSpec{DistributionFamily::Gaussian, 0.0, -1.0}.validate()), Error);
    CHECK_NOTHROW((DistributionSpec{DistributionFamily::Gaussian, 0.0, 1e-9}.validate()));
    for (auto family : {DistributionFamily::Gaussian, DistributionFamily::Uniform, DistributionFamily::CauchyLorentz})
      CHECK(parse_family(to_string(family)) == family);
    CHECK_THROWS_AS(parse_family("lorentz"), Error);
  }
}
