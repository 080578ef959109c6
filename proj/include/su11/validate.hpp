#ifndef SU11_VALIDATE_HPP
#define SU11_VALIDATE_HPP

// Triple-path validation: moment engine vs closed-form coefficient algebra
// (fast regime), plus moment engine vs truncated Fock-space oracle (full
// regime).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include "su11/fock_oracle.hpp"
#include "su11/sensitivity.hpp"

namespace su11 {

enum class CheckStatus { pass, fail, inconclusive };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  int inconclusive = 0;
  CheckStatus status = CheckStatus::pass;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool any(CheckStatus s) const {
    return std::any_of(checks.begin(), checks.end(), [s](const CheckResult& c) { return c.status == s; });
  }
  bool passed() const { return !any(CheckStatus::fail) && !any(CheckStatus::inconclusive); }
};

/// The closed-form route under test; swappable so the harness itself can be mutation-tested.
struct ClosedFormRoute {
  std::function<double(const InterferometerConfig&, const CoeffSet&)> mean_x = closed_form_mean_x;
  std::function<double(const InterferometerConfig&, const CoeffSet&)> var_x = closed_form_var_x;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  int engine_samples = 1000;
  int oracle_samples = 200;
  int cutoff = fock::kDefaultCutoff;
  double leakage_threshold = fock::kDefaultLeakageThreshold;
  int workers = 1;
  int oracle_permits = 1;
  ClosedFormRoute route;
};

inline constexpr double kEngineClosedFormTol = 1e-10;
inline constexpr double kCommutatorTol = 1e-12;
inline constexpr double kUndoTol = 1e-10;
inline constexpr double kSlopeTol = 1e-6;
inline constexpr double kOracleTol = 1e-4;

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline InputSpec random_input(std::mt19937_64& rng, double max_alpha, double max_r) {
  const double two_pi = 2.0 * std::numbers::pi;
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return InputSpec::vacuum();
    case 1: return InputSpec::coherent(uniform(rng, 0.0, max_alpha), uniform(rng, 0.0, two_pi));
    default:
      return InputSpec::squeezed_coherent(uniform(rng, 0.0, max_alpha), uniform(rng, 0.0, two_pi),
                                          uniform(rng, 0.0, max_r), uniform(rng, 0.0, two_pi));
  }
}

}  // namespace detail

struct RandomRegime {
  double max_g = 2.0;
  double max_alpha = 10.0;
  double max_r = 2.5;
  double max_gamma_tau = 2.0;
};

inline constexpr RandomRegime kOracleRegime{0.8, 1.5, 0.6, 1.0};

/// Random configuration with loss and dephasing; spin wave in vacuum.
inline InterferometerConfig random_config(std::mt19937_64& rng, const RandomRegime& regime = {}) {
  const double two_pi = 2.0 * std::numbers::pi;
  InterferometerConfig c;
  c.g1 = detail::uniform(rng, 0.0, regime.max_g);
  c.g2 = detail::uniform(rng, 0.0, regime.max_g);
  c.theta1 = detail::uniform(rng, 0.0, two_pi);
  c.theta2 = detail::uniform(rng, 0.0, two_pi);
  c.phi = detail::uniform(rng, -std::numbers::pi, std::numbers::pi);
  c.T = detail::uniform(rng, 0.0, 1.0);
  c.gamma_tau = detail::uniform(rng, 0.0, regime.max_gamma_tau);
  c.input_a = detail::random_input(rng, regime.max_alpha, regime.max_r);
  c.input_b = InputSpec::vacuum();
  return c;
}

/// Largest moment gap between the engine and the oracle, each entry relative to max(1, |value|).
inline double oracle_gap(const RunResult& engine, const fock::FockRun& oracle) {
  double worst = 0.0;
  auto cmp = [&](const GaussianState& g, const fock::FockMoments& f) {
    for (int i = 0; i < 4; ++i) {
      worst = std::max(worst, relative_gap(f.mean(i), g.mean(i), 1.0));
      for (int j = 0; j < 4; ++j) worst = std::max(worst, relative_gap(f.cov(i, j), g.cov(i, j), 1.0));
    }
    worst = std::max(worst, relative_gap(f.n_a, photon_number(g, kModeA), 1.0));
    worst = std::max(worst, relative_gap(f.n_b, photon_number(g, kModeB), 1.0));
  };
  cmp(engine.after_rp1, oracle.after_rp1);
  cmp(engine.out, oracle.out);
  return worst;
}

inline std::vector<CheckResult> engine_closed_form_checks(const ValidateOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  CheckResult mean{"engine_vs_closed_form_mean", 0.0, kEngineClosedFormTol};
  CheckResult var{"engine_vs_closed_form_var", 0.0, kEngineClosedFormTol};
  CheckResult comm{"lossless_commutator", 0.0, kCommutatorTol};
  CheckResult undo{"balanced_undo", 0.0, kUndoTol};
  CheckResult fd{"finite_difference_slope", 0.0, kSlopeTol};

  for (int k = 0; k < opts.engine_samples; ++k) {
    const InterferometerConfig c = random_config(rng);
    const RunResult r = run(c);
    const CoeffSet cs = coeffs(c);
    mean.worst = std::max(mean.worst, relative_gap(r.out.mean(0), opts.route.mean_x(c, cs), 1.0));
    var.worst = std::max(var.worst, relative_gap(r.out.cov(0, 0), opts.route.var_x(c, cs)));
    fd.worst = std::max(fd.worst, relative_gap(analytic_slope(c), numeric_slope(c), 1.0));

    InterferometerConfig lossless = c;
    lossless.T = 1.0;
    lossless.gamma_tau = 0.0;
    const CoeffSet lc = coeffs(lossless);
    comm.worst = std::max(comm.worst, std::abs(std::norm(lc.U) - std::norm(lc.V) - 1.0));

    InterferometerConfig balanced = lossless;
    balanced.g2 = balanced.g1;
    balanced.theta2 = balanced.theta1 + std::numbers::pi;
    balanced.phi = 0.0;
    const RunResult b = run(balanced);
    const GaussianState in = input_state(balanced);
    undo.worst = std::max({undo.worst, (b.out.mean.head<2>() - in.mean.head<2>()).cwiseAbs().maxCoeff(),
                           (b.out.cov.topLeftCorner<2, 2>() - in.cov.topLeftCorner<2, 2>()).cwiseAbs().maxCoeff()});
  }
  std::vector<CheckResult> out{mean, var, comm, undo, fd};
  for (CheckResult& c : out) {
    c.samples = opts.engine_samples;
    c.status = c.worst <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
  }
  return out;
}

/// Engine vs Fock oracle on random small-regime configurations. Runs whose
/// truncation leakage exceeds the threshold are skipped as inconclusive;
/// draws continue (up to 4× the target) until `oracle_samples` conclusive runs exist.
inline CheckResult oracle_check(const ValidateOptions& opts) {
  std::mt19937_64 rng(opts.seed ^ 0x5eed0f0c4ULL);
  CheckResult res{"engine_vs_fock_oracle", 0.0, kOracleTol};
  const int max_draws = 4 * opts.oracle_samples;
  const int batch = std::max(1, opts.workers) * 4;
  std::counting_semaphore<64> permits(std::clamp(opts.oracle_permits, 1, 64));

  int drawn = 0;
  while (res.samples < opts.oracle_samples && drawn < max_draws) {
    const int count = std::min(batch, max_draws - drawn);
    std::vector<InterferometerConfig> configs;
    for (int i = 0; i < count; ++i) configs.push_back(random_config(rng, kOracleRegime));
    drawn += count;

    std::vector<double> gaps(count, 0.0);
    std::vector<char> valid(count, 0);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next++; i < count; i = next++) {
        permits.acquire();
        const fock::FockRun f = fock::simulate_run(configs[i], opts.cutoff, opts.leakage_threshold);
        permits.release();
        valid[i] = f.valid;
        if (f.valid) gaps[i] = oracle_gap(run(configs[i]), f);
      }
    };
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < std::max(1, opts.workers); ++t) pool.emplace_back(worker);
    }
    for (int i = 0; i < count && res.samples < opts.oracle_samples; ++i) {
      if (!valid[i]) {
        ++res.inconclusive;
        continue;
      }
      ++res.samples;
      res.worst = std::max(res.worst, gaps[i]);
    }
  }
  if (res.worst > res.tolerance) {
    res.status = CheckStatus::fail;
  } else if (res.samples < opts.oracle_samples) {
    res.status = CheckStatus::inconclusive;
  }
  return res;
}

enum class Regime { fast, full };

inline ValidationReport validate(Regime regime, const ValidateOptions& opts = {}) {
  ValidationReport rep;
  rep.checks = engine_closed_form_checks(opts);
  if (regime == Regime::full) rep.checks.push_back(oracle_check(opts));
  return rep;
}

}  // namespace su11

#endif  // SU11_VALIDATE_HPP
