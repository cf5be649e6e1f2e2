#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace haarquench::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr int kCriterionCount = 10;

/// One measured quantity compared against its target.
struct Check {
  std::string label;
  std::string target;
  std::string measured;
  std::string tolerance;
  bool pass = false;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
};

struct AcceptanceReport {
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::vector<Criterion> criteria;

  bool all_pass() const;
  /// One line per criterion: id, PASS/FAIL, title, targets, measurements, tolerances.
  std::string summary_lines() const;
  /// Summary followed by every individual check.
  std::string format() const;
};

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Multiplies every Monte Carlo sample count; statistical tolerances widen
  /// by 1/sqrt(scale) when scale < 1, wall-clock budgets scale linearly.
  double scale = 1.0;
  unsigned workers = 0;
  std::vector<int> criteria;  // empty = all
  std::function<void(const std::string&)> log;
};

AcceptanceReport run_acceptance(const AcceptanceOptions& options);

}  // namespace haarquench::acceptance
