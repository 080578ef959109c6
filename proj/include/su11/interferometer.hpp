#ifndef SU11_INTERFEROMETER_HPP
#define SU11_INTERFEROMETER_HPP

// The hybrid light-atom interferometer: a first Raman pulse (two-mode
// squeezer) correlates the Stokes field a with the spin wave b; the optical
// arm then suffers loss and the phase shift φ while the spin wave dephases;
// a second Raman pulse recombines the arms.
//
// Two independent routes are provided: `run` propagates Gaussian moments
// through the channel sequence, `coeffs` evaluates the closed-form output
// mode coefficients. They agree to round-off.

#include <cmath>
#include <numbers>
#include <utility>

#include "su11/gaussian_core.hpp"

namespace su11 {

inline constexpr int kModeA = 0;
inline constexpr int kModeB = 1;

struct InterferometerConfig {
  double g1 = 1.0;
  double g2 = 1.0;
  double theta1 = 0.0;
  double theta2 = std::numbers::pi;
  double phi = 0.0;
  double T = 1.0;
  double gamma_tau = 0.0;
  InputSpec input_a = InputSpec::vacuum();
  // Experimental: a seeded spin wave may be coherent. Only vacuum is anchored
  // to closed-form results.
  InputSpec input_b = InputSpec::vacuum();

  void validate() const {
    detail::require_finite({g1, g2, theta1, theta2, phi, T, gamma_tau}, "interferometer config");
    detail::require(g1 >= 0.0 && g2 >= 0.0, ErrorKind::invalid_argument, "config: gains must be >= 0");
    detail::require(T >= 0.0 && T <= 1.0, ErrorKind::invalid_argument, "config: T must lie in [0, 1]");
    detail::require(gamma_tau >= 0.0, ErrorKind::invalid_argument, "config: gamma_tau must be >= 0");
    input_a.validate();
    input_b.validate();
    detail::require(input_b.kind != InputKind::squeezed_coherent, ErrorKind::invalid_argument,
                    "config: input_b must be vacuum or coherent");
  }

  bool is_lossless() const { return T == 1.0 && gamma_tau == 0.0; }

  /// g1 = g2 and θ2 − θ1 = π (mod 2π).
  bool is_balanced(double tol = 1e-12) const {
    const double diff = std::remainder(theta2 - theta1 - std::numbers::pi, 2.0 * std::numbers::pi);
    return std::abs(g1 - g2) <= tol && std::abs(diff) <= tol;
  }

  /// Balanced, lossless configuration at φ = 0 with θ1 = 0, θ2 = π.
  static InterferometerConfig balanced(double g, const InputSpec& a) {
    InterferometerConfig c;
    c.g1 = c.g2 = g;
    c.input_a = a;
    return c;
  }
};

struct RunResult {
  GaussianState after_rp1;
  GaussianState mid;
  GaussianState out;
};

inline GaussianState input_state(const InterferometerConfig& config) {
  return GaussianState::product(prepare_input(config.input_a), prepare_input(config.input_b));
}

inline RunResult run(const InterferometerConfig& config) {
  config.validate();
  RunResult r;
  r.after_rp1 = apply(two_mode_squeezer(config.g1, config.theta1), input_state(config), {kModeA, kModeB});
  // Loss then phase on the optical arm; the two commute.
  GaussianState s = apply(loss(config.T), r.after_rp1, {kModeA});
  s = apply(phase_shift(config.phi), s, {kModeA});
  r.mid = apply(dephase(config.gamma_tau), s, {kModeB});
  r.out = apply(two_mode_squeezer(config.g2, config.theta2), r.mid, {kModeA, kModeB});
  return r;
}

/// Closed-form output coefficients:
///   a₂ = U₁ a₀ + V₁ b₀† + √R u₂ V + v₂ F†
///   b₂ = e^{−iφ}[U₂ b₀ + V₂ a₀†] + √R v₂ V† + u₂ F
struct CoeffSet {
  Complex U1, V1, U2, V2;
  // Lossless U, V; only meaningful when `lossless` is set.
  Complex U, V;
  bool lossless = false;
  // Pulse coefficients and noise weights entering the variance formulas.
  double u2 = 1.0;
  Complex v2;
  double R = 0.0;
  double dephasing_noise = 0.0;  // 1 − e^{−2Γτ}

  double abs2_U1() const { return std::norm(U1); }
  double abs2_V1() const { return std::norm(V1); }

  /// [R|u₂|² + |v₂|²(1 − e^{−2Γτ})]/4
  double added_noise() const { return (R * u2 * u2 + std::norm(v2) * dephasing_noise) / 4.0; }
};

inline CoeffSet coeffs(const InterferometerConfig& config) {
  config.validate();
  const double u1 = std::cosh(config.g1);
  const double u2 = std::cosh(config.g2);
  const Complex v1 = std::polar(std::sinh(config.g1), config.theta1);
  const Complex v2 = std::polar(std::sinh(config.g2), config.theta2);
  const Complex ephi = std::polar(1.0, config.phi);
  const double sqrt_t = std::sqrt(config.T);
  const double damp = std::exp(-config.gamma_tau);

  CoeffSet c;
  c.U1 = sqrt_t * u1 * u2 * ephi + damp * std::conj(v1) * v2;
  c.V1 = sqrt_t * v1 * u2 * ephi + damp * u1 * v2;
  c.U2 = damp * u1 * u2 * ephi + sqrt_t * std::conj(v1) * v2;
  c.V2 = damp * v1 * u2 * ephi + sqrt_t * u1 * v2;
  c.u2 = u2;
  c.v2 = v2;
  c.R = 1.0 - config.T;
  c.dephasing_noise = 1.0 - damp * damp;
  if (config.is_lossless()) {
    const double ch1 = std::cosh(config.g1), ch2 = std::cosh(config.g2);
    const double sh1 = std::sinh(config.g1), sh2 = std::sinh(config.g2);
    const double dtheta = config.theta2 - config.theta1;
    const Complex rel = std::polar(1.0, config.phi - dtheta);
    c.U = (ch1 * ch2 * rel + sh1 * sh2) * std::polar(1.0, dtheta);
    c.V = (sh1 * ch2 * rel + ch1 * sh2) * std::polar(1.0, config.theta2);
    c.lossless = true;
  }
  return c;
}

/// d/dφ of U₁ and V₁.
inline std::pair<Complex, Complex> coeff_phase_derivative(const InterferometerConfig& config) {
  const double u1 = std::cosh(config.g1);
  const double u2 = std::cosh(config.g2);
  const Complex v1 = std::polar(std::sinh(config.g1), config.theta1);
  const Complex i_ephi = Complex(0.0, 1.0) * std::polar(std::sqrt(config.T), config.phi);
  return {i_ephi * u1 * u2, i_ephi * v1 * u2};
}

/// ⟨X_a2⟩ = Re(U₁ α + V₁ β*).
inline double closed_form_mean_x(const InterferometerConfig& config, const CoeffSet& c) {
  return std::real(c.U1 * config.input_a.alpha() + c.V1 * std::conj(config.input_b.alpha()));
}

/// ⟨ΔX_a2²⟩ from the closed-form coefficients: the coherent-input expression
/// (U₁, V₁ weights plus loss/dephasing noise), or for a squeezed input
/// |U₁|²(e^{2r}sin²Θ + e^{−2r}cos²Θ) with Θ = θ_s/2 + arg U₁ in place of |U₁|².
inline double closed_form_var_x(const InterferometerConfig& config, const CoeffSet& c) {
  double a_term = c.abs2_U1();
  if (config.input_a.kind == InputKind::squeezed_coherent) {
    const double big_theta = config.input_a.theta_s / 2.0 + std::arg(c.U1);
    const double r2 = 2.0 * config.input_a.r;
    const double s = std::sin(big_theta), co = std::cos(big_theta);
    a_term *= std::exp(r2) * s * s + std::exp(-r2) * co * co;
  }
  return (a_term + c.abs2_V1()) / 4.0 + c.added_noise();
}

struct PhaseSensingNumber {
  double n_ph;
  double n_photon;
  double n_atom;
};

/// Quanta inside the interferometer after the first Raman pulse, from the moment engine.
inline PhaseSensingNumber phase_sensing_number(const InterferometerConfig& config) {
  const RunResult r = run(config);
  const double na = photon_number(r.after_rp1, kModeA);
  const double nb = photon_number(r.after_rp1, kModeB);
  return {na + nb, na, nb};
}

/// Same count after loss and dephasing (alternative baseline convention).
inline PhaseSensingNumber phase_sensing_number_post_loss(const InterferometerConfig& config) {
  const RunResult r = run(config);
  const double na = photon_number(r.mid, kModeA);
  const double nb = photon_number(r.mid, kModeB);
  return {na + nb, na, nb};
}

/// G_RP = 2 sinh²g.
inline double raman_gain(double g) {
  const double s = std::sinh(g);
  return 2.0 * s * s;
}

/// Input photon number N_in = |α|² + sinh²r.
inline double input_photon_number(const InputSpec& spec) {
  const double s = std::sinh(spec.r);
  return spec.n_alpha() + s * s;
}

/// n_ph = N_in + N_in·G_RP + G_RP (vacuum spin wave).
inline double probe_number_closed_form(double n_in, double g) {
  const double gain = raman_gain(g);
  return n_in + n_in * gain + gain;
}

inline double lcc_rp1(const InterferometerConfig& config) { return lcc(run(config).after_rp1, kModeA, kModeB); }
inline double lcc_out(const InterferometerConfig& config) { return lcc(run(config).out, kModeA, kModeB); }

}  // namespace su11

#endif  // SU11_INTERFEROMETER_HPP
