#ifndef SU11_SENSITIVITY_HPP
#define SU11_SENSITIVITY_HPP

// Error-propagation phase sensitivity of the amplitude quadrature X_a2:
//   Δφ² = ⟨ΔX_a2²⟩ / |∂⟨X_a2⟩/∂φ|²,
// its closed-form optima and the probe-number baselines SQL = 1/√n_ph,
// HL = 1/n_ph.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "su11/interferometer.hpp"
#include "su11/scalar_search.hpp"

namespace su11 {

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kMinFiniteDifferenceStep = 1e-9;
inline constexpr double kZeroSlope = 1e-12;

/// Which state the probe number n_ph is taken from.
enum class Baseline { pre_loss, post_loss };

inline std::string_view to_string(Baseline b) { return b == Baseline::pre_loss ? "pre_loss" : "post_loss"; }

/// |a − b| relative to max(|a|, |b|, floor).
inline double relative_gap(double a, double b, double floor = 0.0) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// d⟨X_a2⟩/dφ from the coefficient derivatives.
inline double analytic_slope(const InterferometerConfig& config) {
  const auto [dU1, dV1] = coeff_phase_derivative(config);
  return std::real(dU1 * config.input_a.alpha() + dV1 * std::conj(config.input_b.alpha()));
}

/// √(T N_α) cosh g₁ cosh g₂ |sin(φ + θ_α)|: the balanced-configuration slope.
inline double balanced_slope_magnitude(const InterferometerConfig& config) {
  return std::sqrt(config.T * config.input_a.n_alpha()) * std::cosh(config.g1) * std::cosh(config.g2) *
         std::abs(std::sin(config.phi + config.input_a.alpha_phase));
}

/// Central finite difference of the engine's ⟨X_a2⟩.
inline double numeric_slope(const InterferometerConfig& config, double step = kFiniteDifferenceStep) {
  detail::require(std::isfinite(step) && step >= kMinFiniteDifferenceStep, ErrorKind::step_underflow,
                  "finite-difference phase step below 1e-9");
  InterferometerConfig plus = config, minus = config;
  plus.phi += step;
  minus.phi -= step;
  return (run(plus).out.mean(0) - run(minus).out.mean(0)) / (2.0 * step);
}

struct SlopeResult {
  double analytic;
  double numeric;
};

inline SlopeResult slope(const InterferometerConfig& config, double step = kFiniteDifferenceStep) {
  return {analytic_slope(config), numeric_slope(config, step)};
}

struct VarianceResult {
  double engine;
  double closed_form;
};

inline VarianceResult output_variance(const InterferometerConfig& config) {
  return {run(config).out.cov(0, 0), closed_form_var_x(config, coeffs(config))};
}

struct Limits {
  double sql;
  double hl;
};

inline Limits limits(double n_ph) {
  detail::require(std::isfinite(n_ph) && n_ph > 0.0, ErrorKind::invalid_argument, "limits: n_ph must be > 0");
  return {1.0 / std::sqrt(n_ph), 1.0 / n_ph};
}

struct SensitivityReport {
  double phi = 0.0;
  double mean_x = 0.0;
  double slope = 0.0;
  double var_x = 0.0;
  double delta_phi = 0.0;
  double n_ph = 0.0;
  double sql = 0.0;
  double hl = 0.0;
  double path_disagreement = 0.0;
  Baseline baseline = Baseline::pre_loss;
};

inline double probe_number(const RunResult& r, Baseline baseline) {
  const GaussianState& s = baseline == Baseline::pre_loss ? r.after_rp1 : r.mid;
  return photon_number(s, kModeA) + photon_number(s, kModeB);
}

inline void require_informative(double slope_value) {
  detail::require(std::isfinite(slope_value) && std::abs(slope_value) > kZeroSlope,
                  ErrorKind::non_informative_point, "non-informative operating point: zero slope");
}

inline SensitivityReport delta_phi(const InterferometerConfig& config, Baseline baseline = Baseline::pre_loss) {
  const RunResult r = run(config);
  const CoeffSet c = coeffs(config);

  SensitivityReport rep;
  rep.baseline = baseline;
  rep.phi = config.phi;
  rep.mean_x = r.out.mean(0);
  rep.var_x = r.out.cov(0, 0);
  rep.slope = analytic_slope(config);
  require_informative(rep.slope);
  rep.delta_phi = std::sqrt(rep.var_x) / std::abs(rep.slope);
  rep.n_ph = probe_number(r, baseline);
  const Limits lim = limits(rep.n_ph);
  rep.sql = lim.sql;
  rep.hl = lim.hl;

  const double fd = numeric_slope(config);
  rep.path_disagreement = std::max({relative_gap(rep.mean_x, closed_form_mean_x(config, c), 1.0),
                                    relative_gap(rep.var_x, closed_form_var_x(config, c)),
                                    relative_gap(rep.slope, fd, 1.0)});
  return rep;
}

/// Δφ·n_ph; 1 means the Heisenberg limit is met exactly.
inline double hl_ratio(const InterferometerConfig& config, Baseline baseline = Baseline::pre_loss) {
  const SensitivityReport rep = delta_phi(config, baseline);
  return rep.delta_phi * rep.n_ph;
}

/// Optimal Δφ for a coherent input: 1/(√N_α · 2cosh²g).
inline double optimal_delta_phi_coherent(double n_alpha, double g) {
  const double c = std::cosh(g);
  return 1.0 / (std::sqrt(n_alpha) * 2.0 * c * c);
}

/// Optimal Δφ for a squeezed-coherent input: e^{−r}/(√N_α · 2cosh²g).
inline double optimal_delta_phi_squeezed(double n_alpha, double g, double r) {
  return std::exp(-r) * optimal_delta_phi_coherent(n_alpha, g);
}

// ---------------------------------------------------------------------------
// Operating-point search

enum class FreeParam { phi, theta_s, theta_alpha };

inline std::string_view to_string(FreeParam p) {
  switch (p) {
    case FreeParam::phi: return "phi";
    case FreeParam::theta_s: return "theta_s";
    case FreeParam::theta_alpha: return "theta_alpha";
  }
  return "?";
}

inline double& param_ref(InterferometerConfig& c, FreeParam p) {
  switch (p) {
    case FreeParam::phi: return c.phi;
    case FreeParam::theta_s: return c.input_a.theta_s;
    case FreeParam::theta_alpha: return c.input_a.alpha_phase;
  }
  return c.phi;
}

struct OptimizeOptions {
  int grid_points = 720;
  double tolerance = 1e-8;
  int grid_cycles = 3;
  int max_refine_cycles = 60;
  double flat_threshold = 1e-14;
};

struct OptimizeResult {
  std::vector<FreeParam> free;
  std::vector<double> argmin;  // same order as `free`, wrapped into [−π, π)
  double delta_phi_min = 0.0;
  InterferometerConfig best;
  long evaluations = 0;
};

/// Δφ from the engine variance and the analytic slope; +∞ where the slope vanishes.
inline double sensitivity_objective(const InterferometerConfig& config) {
  const double s = analytic_slope(config);
  if (!(std::abs(s) > kZeroSlope)) return std::numeric_limits<double>::infinity();
  return std::sqrt(run(config).out.cov(0, 0)) / std::abs(s);
}

namespace detail {

inline double wrap_angle(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(x + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  return w - std::numbers::pi;
}

}  // namespace detail

/// Minimizes Δφ over the free angles. Each angle is scanned on a grid of
/// `grid_points` over [−π, π) (cyclically, one coordinate at a time when more
/// than one is free), then refined by golden-section line searches to
/// `tolerance` (Powell direction set when several angles are free).
inline OptimizeResult optimize(const InterferometerConfig& config, const std::vector<FreeParam>& free,
                               const OptimizeOptions& opts = {}) {
  config.validate();
  detail::require(!free.empty(), ErrorKind::invalid_argument, "optimize: no free parameter");
  for (std::size_t i = 0; i < free.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      detail::require(free[i] != free[j], ErrorKind::invalid_argument, "optimize: duplicate free parameter");
    }
  }

  OptimizeResult res;
  res.free = free;
  InterferometerConfig cur = config;
  for (FreeParam p : free) param_ref(cur, p) = detail::wrap_angle(param_ref(cur, p));

  auto along = [&](FreeParam p) {
    return [&cur, p, &res](double x) {
      InterferometerConfig trial = cur;
      param_ref(trial, p) = x;
      ++res.evaluations;
      return sensitivity_objective(trial);
    };
  };

  const double lo = -std::numbers::pi;
  const double hi = std::numbers::pi;
  const double step = (hi - lo) / opts.grid_points;
  const int cycles = free.size() == 1 ? 1 : opts.grid_cycles;
  double spread = 0.0;
  for (int cycle = 0; cycle < cycles; ++cycle) {
    for (FreeParam p : free) {
      const GridMinimum m = grid_minimize(along(p), lo, hi, opts.grid_points);
      detail::require(m.index >= 0, ErrorKind::non_informative_point,
              "optimize: slope vanishes everywhere along " + std::string(to_string(p)));
      spread = std::max(spread, m.max_finite - m.value);
      param_ref(cur, p) = m.x;
    }
  }
  detail::require(spread >= opts.flat_threshold, ErrorKind::flat_landscape,
          "optimize: flat landscape (variation below 1e-14)");

  // Powell direction-set refinement: golden-section line searches along the
  // coordinate axes plus the net displacement of each sweep.
  const int n = static_cast<int>(free.size());
  auto at = [&](const Eigen::VectorXd& x) {
    InterferometerConfig trial = cur;
    for (int i = 0; i < n; ++i) param_ref(trial, free[i]) = x[i];
    ++res.evaluations;
    return sensitivity_objective(trial);
  };
  auto search = [&](Eigen::VectorXd& x, const Eigen::VectorXd& dir) {
    const double t = line_minimize([&](double s) { return at(x + s * dir); }, step, opts.tolerance,
                                   std::numbers::pi);
    x += t * dir;
    return std::abs(t);
  };
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = param_ref(cur, free[i]);
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) dirs.push_back(Eigen::VectorXd::Unit(n, i));
  for (int cycle = 0; cycle < opts.max_refine_cycles; ++cycle) {
    const Eigen::VectorXd x0 = x;
    double f_prev = at(x), best_drop = 0.0;
    int best_dir = 0;
    for (int i = 0; i < n; ++i) {
      search(x, dirs[i]);
      const double f = at(x);
      if (f_prev - f > best_drop) {
        best_drop = f_prev - f;
        best_dir = i;
      }
      f_prev = f;
    }
    const Eigen::VectorXd delta = x - x0;
    if (delta.cwiseAbs().maxCoeff() < opts.tolerance) break;
    if (n > 1) {
      const Eigen::VectorXd d = delta.normalized();
      search(x, d);
      dirs[best_dir] = d;
      if ((cycle + 1) % (n + 1) == 0) {
        for (int i = 0; i < n; ++i) dirs[i] = Eigen::VectorXd::Unit(n, i);
      }
    }
  }
  for (int i = 0; i < n; ++i) param_ref(cur, free[i]) = x[i];

  for (FreeParam p : free) {
    param_ref(cur, p) = detail::wrap_angle(param_ref(cur, p));
    res.argmin.push_back(param_ref(cur, p));
  }
  res.best = cur;
  res.delta_phi_min = sensitivity_objective(cur);
  return res;
}

}  // namespace su11

#endif  // SU11_SENSITIVITY_HPP
