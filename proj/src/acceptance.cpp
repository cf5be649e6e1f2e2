#include "haarquench/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>

#include "haarquench/cli.hpp"
#include "haarquench/concurrence.hpp"
#include "haarquench/experiment.hpp"
#include "haarquench/gme.hpp"
#include "haarquench/linalg.hpp"
#include "haarquench/states.hpp"

namespace haarquench::acceptance {

namespace {

// Streams for the property suites live far above anything an experiment uses.
constexpr std::uint64_t kPropertyStreamBase = std::uint64_t{1} << 48;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

Check near(std::string label, double target, double measured, double tol, const char* target_format = "%.3f") {
  return {std::move(label), fmt(target_format, target), fmt("%.5f", measured), "+/-" + fmt("%g", tol),
          std::abs(measured - target) <= tol * (1.0 + 1e-12)};
}

Check at_most(std::string label, double limit, double measured, const char* format = "%.3g") {
  return {std::move(label), "<= " + fmt(format, limit), fmt(format, measured), "-", measured <= limit};
}

Check below(std::string label, double limit, double measured, const char* format = "%.3g") {
  return {std::move(label), "< " + fmt(format, limit), fmt(format, measured), "-", measured < limit};
}

Check ordered(std::string label, double smaller, double larger) {
  return {std::move(label), "a < b", fmt("%.5f", smaller) + " < " + fmt("%.5f", larger), "-", smaller < larger};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix random_hermitian(RngStream& rng, Eigen::Index d) {
  ComplexMatrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = Complex(rng.standard_normal(), rng.standard_normal());
  return 0.5 * (a + a.adjoint());
}

// Ginibre-distributed full-rank density matrix.
DensityMatrix random_density(RngStream& rng, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  ComplexMatrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = Complex(rng.standard_normal(), rng.standard_normal());
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(n_qubits, 0.5 * (rho + rho.adjoint()));
}

PureState random_pure(RngStream& rng, int n_qubits) { return normalize(haar_raw(n_qubits, rng)); }

struct Timed {
  double wall = 0.0;
  double cpu = 0.0;
};

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& o) : o_(o) {
    run_.workers = o.workers;
    widen_ = o.scale < 1.0 ? 1.0 / std::sqrt(o.scale) : 1.0;
  }

  Criterion run(int id) {
    Criterion c;
    c.id = id;
    const auto t0 = std::chrono::steady_clock::now();
    switch (id) {
      case 1: c1(c); break;
      case 2: multi_target(c, 1); break;
      case 3: multi_target(c, 2); break;
      case 4: multi_target(c, 4); break;
      case 5: c5(c); break;
      case 6: c6(c); break;
      case 7: c7(c); break;
      case 8: c8(c); break;
      case 9: c9(c); break;
      case 10: c10(c); break;
      default: throw Error(ErrorCode::InvalidArgument, "no acceptance criterion " + std::to_string(id));
    }
    c.seconds = seconds_since(t0);
    return c;
  }

 private:
  double tol(double t) const { return t * widen_; }
  double budget(double seconds) const { return seconds * o_.scale; }
  std::size_t count(std::size_t n) const { return cli::scaled_count(n, o_.scale); }

  void log(const std::string& msg) const {
    if (o_.log) o_.log(msg);
  }

  ExperimentConfig two_qubit(std::size_t states, std::size_t configs) const {
    ExperimentConfig c;
    c.n_qubits = 2;
    c.n_states = count(states);
    c.n_disorder_configs = count(configs);
    c.siqr = 0.5;
    c.master_seed = o_.seed;
    return c;
  }

  ExperimentConfig quenched2(DistributionFamily f, std::vector<std::size_t> targets) const {
    ExperimentConfig c = two_qubit(100'000, 50);
    c.family = f;
    c.targets = std::move(targets);
    return c;
  }

  static std::vector<std::size_t> targets_for(int n) {
    if (n == 1) return {0};
    if (n == 2) return {0, 2};
    return {0, 2, 4, 6};
  }

  const CleanResult& clean(const ExperimentConfig& c) {
    const std::string key = cli::format_config(c);
    if (auto it = clean_.find(key); it != clean_.end()) return it->second;
    log("  clean run: " + std::to_string(c.n_qubits) + " qubits, " + std::to_string(c.n_states) + " states");
    const auto t0 = std::chrono::steady_clock::now();
    const std::clock_t c0 = std::clock();
    CleanResult r = run_clean(c, run_);
    timing_[key] = {seconds_since(t0), static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC};
    return clean_.emplace(key, std::move(r)).first->second;
  }

  const QuenchedResult& quenched(const ExperimentConfig& c) {
    const std::string key = cli::format_config(c);
    if (auto it = quenched_.find(key); it != quenched_.end()) return it->second;
    log("  quenched run: " + std::to_string(c.n_qubits) + " qubits, " + std::string(to_string(c.family)) + ", " +
        std::to_string(c.targets.size()) + " target(s), " + std::to_string(c.n_states) + " x " +
        std::to_string(c.n_disorder_configs));
    const auto t0 = std::chrono::steady_clock::now();
    const std::clock_t c0 = std::clock();
    QuenchedResult r = run_quenched(c, run_);
    timing_[key] = {seconds_since(t0), static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC};
    order_.push_back(key);
    return quenched_.emplace(key, std::move(r)).first->second;
  }

  Timed timing(const ExperimentConfig& c) const { return timing_.at(cli::format_config(c)); }

  void c1(Criterion& c) {
    c.title = "Clean two-qubit Haar ensemble";
    const ExperimentConfig cfg = two_qubit(1'000'000, 0);
    const auto& r = clean(cfg);
    c.checks.push_back(near("mean concurrence", 0.589, r.histogram.mean, tol(0.002)));
    c.checks.push_back(near("std concurrence", 0.230, r.histogram.std, tol(0.002)));
    c.checks.push_back(below("wall time [s]", budget(120.0), timing(cfg).wall));
  }

  struct Targets {
    double mean, std;
  };

  static Targets reference_targets(int n_targets, DistributionFamily f) {
    static const std::map<std::pair<int, DistributionFamily>, Targets> table{
        {{1, DistributionFamily::Gaussian}, {0.588, 0.197}},
        {{1, DistributionFamily::Uniform}, {0.589, 0.205}},
        {{1, DistributionFamily::CauchyLorentz}, {0.529, 0.152}},
        {{2, DistributionFamily::Gaussian}, {0.586, 0.170}},
        {{2, DistributionFamily::Uniform}, {0.588, 0.184}},
        {{2, DistributionFamily::CauchyLorentz}, {0.528, 0.138}},
        {{4, DistributionFamily::Gaussian}, {0.587, 0.126}},
        {{4, DistributionFamily::Uniform}, {0.589, 0.148}},
        {{4, DistributionFamily::CauchyLorentz}, {0.502, 0.081}},
    };
    return table.at({n_targets, f});
  }

  static constexpr std::array<DistributionFamily, 3> kFamilies{
      DistributionFamily::Gaussian, DistributionFamily::Uniform, DistributionFamily::CauchyLorentz};

  void multi_target(Criterion& c, int n_targets) {
    c.title = n_targets == 1   ? "Single-parameter disorder"
              : n_targets == 2 ? "Two-parameter disorder"
                               : "Four-parameter disorder";
    double wall = 0.0;
    for (auto f : kFamilies) {
      const ExperimentConfig cfg = quenched2(f, targets_for(n_targets));
      const auto& r = quenched(cfg);
      const Targets t = reference_targets(n_targets, f);
      const std::string name(to_string(f));
      c.checks.push_back(near(name + " mean", t.mean, r.quenched.mean, tol(0.005)));
      c.checks.push_back(near(name + " std", t.std, r.quenched.std, tol(0.005)));
      wall += timing(cfg).wall;
    }
    if (n_targets == 1) c.checks.push_back(below("total wall time [s]", budget(600.0), wall));
  }

  void c5(Criterion& c) {
    c.title = "Noisy two-qubit states";
    ExperimentConfig clean9 = two_qubit(1'000'000, 0);
    clean9.noise_p = 0.9;
    ExperimentConfig cl9 = quenched2(DistributionFamily::CauchyLorentz, {0});
    cl9.noise_p = 0.9;
    ExperimentConfig clean8 = clean9;
    clean8.noise_p = 0.8;
    c.checks.push_back(near("p=0.9 clean std", 0.207, clean(clean9).histogram.std, tol(0.005)));
    c.checks.push_back(near("p=0.9 cauchy_lorentz quenched std", 0.159, quenched(cl9).quenched.std, tol(0.005)));
    c.checks.push_back(
        near("p=0.8 clean zero-entanglement percentage", 2.32, clean(clean8).histogram.zero_percentage, tol(0.10), "%.2f"));
  }

  static constexpr std::array<double, 5> kGammas{0.3, 0.4, 0.5, 0.6, 0.7};

  ExperimentConfig sweep_config(double g) const {
    ExperimentConfig cfg = quenched2(DistributionFamily::Gaussian, {0});
    cfg.siqr = g;
    return cfg;
  }

  void c6(Criterion& c) {
    c.title = "Gaussian disorder strength sweep";
    std::vector<double> stds;
    for (double g : kGammas) {
      const auto& r = quenched(sweep_config(g));
      stds.push_back(r.quenched.std);
      c.checks.push_back(near("mean at gamma " + fmt("%.1f", g), 0.589, r.quenched.mean, tol(0.01)));
    }
    for (std::size_t k = 0; k + 1 < stds.size(); ++k)
      c.checks.push_back(ordered("std(gamma " + fmt("%.1f", kGammas[k + 1]) + ") < std(gamma " + fmt("%.1f", kGammas[k]) + ")",
                                 stds[k + 1], stds[k]));
  }

  ExperimentConfig three_qubit_clean() const {
    ExperimentConfig c;
    c.n_qubits = 3;
    c.n_states = count(2000);
    c.master_seed = o_.seed;
    return c;
  }

  ExperimentConfig three_qubit_quenched() const {
    ExperimentConfig c = three_qubit_clean();
    c.n_states = count(500);
    c.n_disorder_configs = count(10);
    c.family = DistributionFamily::CauchyLorentz;
    c.targets = {0, 2, 4, 6};
    return c;
  }

  void c7(Criterion& c) {
    c.title = "Three-qubit GME ensembles";
    const ExperimentConfig cc = three_qubit_clean();
    const ExperimentConfig qc = three_qubit_quenched();
    const auto& rc = clean(cc);
    const auto& rq = quenched(qc);
    c.checks.push_back(near("clean mean", 0.35, rc.histogram.mean, tol(0.01), "%.2f"));
    c.checks.push_back(near("clean std", 0.068, rc.histogram.std, tol(0.005)));
    c.checks.push_back(near("cauchy_lorentz quenched mean", 0.29, rq.quenched.mean, tol(0.02), "%.2f"));
    c.checks.push_back(near("cauchy_lorentz quenched std", 0.039, rq.quenched.std, tol(0.01)));
    const Timed tc = timing(cc), tq = timing(qc);
    const double solves = static_cast<double>(rc.diagnostics.evaluations + rq.diagnostics.evaluations);
    c.checks.push_back(at_most("cpu time per SDP solve [s]", 1.0, (tc.cpu + tq.cpu) / solves));
    c.checks.push_back(below("total wall time [s]", budget(2700.0), tc.wall + tq.wall));
    const std::size_t loose = rc.diagnostics.loose_sdp_solves + rq.diagnostics.loose_sdp_solves;
    if (loose > 0) log("  note: " + std::to_string(loose) + " GME solves accepted at the loose 1e-7 tolerance");
  }

  void c8(Criterion& c) {
    c.title = "Disorder inhibits the spread";
    // Every quenched run of criteria 2-7, reusing cached results.
    for (int n : {1, 2, 4})
      for (auto f : kFamilies) quenched(quenched2(f, targets_for(n)));
    {
      ExperimentConfig cl9 = quenched2(DistributionFamily::CauchyLorentz, {0});
      cl9.noise_p = 0.9;
      quenched(cl9);
    }
    for (double g : kGammas) quenched(sweep_config(g));
    quenched(three_qubit_quenched());

    for (const auto& key : order_) {
      const auto& r = quenched_.at(key);
      const ExperimentConfig cfg = cli::parse_config(key);
      std::string label = std::to_string(cfg.n_qubits) + "q " + std::string(to_string(cfg.family)) + " " +
                          std::to_string(cfg.targets.size()) + " target(s)";
      if (cfg.noise_p) label += " p=" + fmt("%g", *cfg.noise_p);
      if (cfg.siqr != 0.5) label += " gamma=" + fmt("%g", cfg.siqr);
      c.checks.push_back(ordered("std(quenched) < std(clean), " + label, r.quenched.std, r.clean.std));
    }
    for (auto f : kFamilies) {
      const double s1 = quenched(quenched2(f, targets_for(1))).quenched.std;
      const double s2 = quenched(quenched2(f, targets_for(2))).quenched.std;
      const double s4 = quenched(quenched2(f, targets_for(4))).quenched.std;
      const std::string name(to_string(f));
      c.checks.push_back(ordered("std(4 targets) < std(2 targets), " + name, s4, s2));
      c.checks.push_back(ordered("std(2 targets) < std(1 target), " + name, s2, s1));
    }
  }

  void c9(Criterion& c) {
    c.title = "SDP / GME property suite";
    std::size_t solves = 0, valid = 0;
    double worst_gap = 0.0;
    auto record = [&](const GmeValue& g) {
      ++solves;
      if (g.witness.is_valid()) ++valid;
      worst_gap = std::max(worst_gap, g.relative_gap);
      return g.value;
    };

    c.checks.push_back(near("GHZ monotone", 0.5, record(gme_monotone_pure(ghz_state(3))), 1e-5));

    const ComplexVector bell = bell_state().amplitudes();
    const ComplexVector zero1 = ComplexVector::Unit(2, 0);
    const PureState product = basis_state(3, 0);
    auto join = [](const ComplexVector& a, const ComplexVector& b) {
      return PureState(3, linalg::tensor(a, b));
    };
    double bisep = 0.0;
    bisep = std::max(bisep, std::abs(record(gme_monotone_pure(product))));
    bisep = std::max(bisep, std::abs(record(gme_monotone_pure(join(bell, zero1)))));
    bisep = std::max(bisep, std::abs(record(gme_monotone_pure(join(zero1, bell)))));
    c.checks.push_back(at_most("max |monotone| on product/biseparable states", 1e-6, bisep));

    double worst_bipartite = 0.0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      RngStream rng(o_.seed, kPropertyStreamBase + k);
      const DensityMatrix rho = random_density(rng, 2);
      const double g = record(gme_bipartite(rho));
      worst_bipartite = std::max(worst_bipartite, std::abs(g - negativity(rho, 1)));
    }
    c.checks.push_back(at_most("max |gme_bipartite - negativity| (100 mixed states)", 1e-5, worst_bipartite));

    for (std::uint64_t k = 0; k < 30; ++k) {
      RngStream rng(o_.seed, kPropertyStreamBase + 1000 + k);
      if (k < 20) record(gme_monotone_pure(random_pure(rng, 3)));
      else record(gme_monotone(with_white_noise(random_pure(rng, 3), 0.8)));
    }
    c.checks.push_back({"valid witness certificates", std::to_string(solves) + "/" + std::to_string(solves),
                        std::to_string(valid) + "/" + std::to_string(solves), "-", valid == solves});
    c.checks.push_back(at_most("max relative duality gap", 1e-7, worst_gap));
  }

  void c10(Criterion& c) {
    c.title = "Numerical property suite";
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 10'000; ++k) {
      RngStream rng(o_.seed, kPropertyStreamBase + 10'000 + k);
      const PureState psi = random_pure(rng, 2);
      worst = std::max(worst, std::abs(concurrence_pure(psi) - concurrence_mixed(DensityMatrix(psi))));
    }
    c.checks.push_back(at_most("max |concurrence_pure - concurrence_mixed| (10^4 states)", 1e-8, worst));

    double recon = 0.0, unitarity = 0.0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
      RngStream rng(o_.seed, kPropertyStreamBase + 100'000 + k);
      const ComplexMatrix h = random_hermitian(rng, k % 2 ? 8 : 4);
      const auto e = linalg::hermitian_eigen(h);
      const ComplexMatrix back = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
      recon = std::max(recon, (back - h).norm() / h.norm());
      unitarity = std::max(
          unitarity, (e.eigenvectors.adjoint() * e.eigenvectors - linalg::identity(h.rows())).norm());
    }
    c.checks.push_back(at_most("max relative eigen-reconstruction error", 1e-10, recon));
    c.checks.push_back(at_most("max ||V^dagger V - I||_F", 1e-10, unitarity));

    double werner = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double p = 0.05 * k;
      const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
      werner = std::max(werner, std::abs(concurrence_mixed(with_white_noise(bell_state(), p)) - expected));
    }
    c.checks.push_back(at_most("max |C(Werner) - max(0,(3p-1)/2)| on p grid", 1e-9, werner));
  }

  const AcceptanceOptions& o_;
  RunOptions run_;
  double widen_ = 1.0;
  std::map<std::string, CleanResult> clean_;
  std::map<std::string, QuenchedResult> quenched_;
  std::map<std::string, Timed> timing_;
  std::vector<std::string> order_;
};

std::string join_field(const Criterion& c, std::string Check::*field) {
  std::string out;
  for (const auto& k : c.checks) out += (out.empty() ? "" : "; ") + k.*field;
  return out;
}

}  // namespace

bool Criterion::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.pass; });
}

bool AcceptanceReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass(); });
}

std::string AcceptanceReport::summary_lines() const {
  std::ostringstream out;
  for (const auto& c : criteria) {
    out << "C" << c.id << (c.id < 10 ? "  " : " ") << (c.pass() ? "PASS" : "FAIL") << "  " << c.title
        << " | target: " << join_field(c, &Check::target) << " | measured: " << join_field(c, &Check::measured)
        << " | tol: " << join_field(c, &Check::tolerance) << '\n';
  }
  return out.str();
}

std::string AcceptanceReport::format() const {
  std::ostringstream out;
  out << "acceptance report (seed " << seed << ", scale " << scale << ")\n\n" << summary_lines() << '\n';
  for (const auto& c : criteria) {
    out << "C" << c.id << ' ' << c.title << " (" << fmt("%.1f", c.seconds) << " s)\n";
    for (const auto& k : c.checks)
      out << "  [" << (k.pass ? "PASS" : "FAIL") << "] " << k.label << ": target " << k.target << ", measured "
          << k.measured << ", tol " << k.tolerance << '\n';
  }
  std::size_t passed = 0;
  for (const auto& c : criteria) passed += c.pass() ? 1 : 0;
  out << '\n' << passed << '/' << criteria.size() << " criteria passed\n";
  return out.str();
}

AcceptanceReport run_acceptance(const AcceptanceOptions& options) {
  if (!(options.scale > 0.0)) throw Error(ErrorCode::ConfigError, "scale must be positive");
  AcceptanceReport report;
  report.seed = options.seed;
  report.scale = options.scale;
  std::vector<int> ids = options.criteria;
  if (ids.empty())
    for (int k = 1; k <= kCriterionCount; ++k) ids.push_back(k);
  Suite suite(options);
  for (int id : ids) {
    if (options.log) options.log("criterion " + std::to_string(id));
    report.criteria.push_back(suite.run(id));
    if (options.log) options.log(std::string(report.criteria.back().pass() ? "  PASS" : "  FAIL"));
  }
  return report;
}

}  // namespace haarquench::acceptance
