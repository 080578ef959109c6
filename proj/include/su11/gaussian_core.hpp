#ifndef SU11_GAUSSIAN_CORE_HPP
#define SU11_GAUSSIAN_CORE_HPP

// Gaussian states of a few bosonic modes and the channels that act on their
// first and second moments.
//
// Quadrature convention used throughout the project:
//   X = (a + a†)/2,  P = (a − a†)/(2i),  [X, P] = i/2,
// so the vacuum has covariance I/4 and a = X + iP. Moments are ordered
// (X_1, P_1, ..., X_M, P_M). The pipeline fixes mode 0 = optical field a and
// mode 1 = atomic spin wave b.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "su11/error.hpp"

namespace su11 {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

inline constexpr double kVacuumVariance = 0.25;

/// Block-diagonal symplectic form Ω = ⊕ [[0, 1], [−1, 0]].
inline Mat symplectic_form(int mode_count) {
  Mat omega = Mat::Zero(2 * mode_count, 2 * mode_count);
  for (int m = 0; m < mode_count; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

namespace detail {

inline bool all_finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

inline void require_finite(std::initializer_list<double> values, const char* what) {
  require(all_finite(values), ErrorKind::invalid_argument, std::string(what) + ": non-finite input");
}

// Smallest eigenvalue of the Hermitian matrix A + i·B (A symmetric, B antisymmetric).
inline double min_hermitian_eigenvalue(const Mat& real_part, const Mat& imag_part) {
  Eigen::MatrixXcd h(real_part.rows(), real_part.cols());
  h.real() = real_part;
  h.imag() = imag_part;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

inline void symmetrize(Mat& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace detail

/// First moments and quadrature covariance of an M-mode Gaussian state.
struct GaussianState {
  int mode_count = 0;
  Vec mean;
  Mat cov;

  static GaussianState vacuum(int modes) {
    detail::require(modes > 0, ErrorKind::invalid_argument, "mode count must be positive");
    return {modes, Vec::Zero(2 * modes), kVacuumVariance * Mat::Identity(2 * modes, 2 * modes)};
  }

  /// Tensor product: modes of `first` followed by modes of `second`.
  static GaussianState product(const GaussianState& first, const GaussianState& second) {
    const int n1 = 2 * first.mode_count;
    const int n2 = 2 * second.mode_count;
    GaussianState out{first.mode_count + second.mode_count, Vec(n1 + n2), Mat::Zero(n1 + n2, n1 + n2)};
    out.mean << first.mean, second.mean;
    out.cov.topLeftCorner(n1, n1) = first.cov;
    out.cov.bottomRightCorner(n2, n2) = second.cov;
    return out;
  }

  /// Smallest eigenvalue of cov + (i/4)Ω; non-negative for physical states.
  double physicality_margin() const {
    return detail::min_hermitian_eigenvalue(cov, 0.25 * symplectic_form(mode_count));
  }

  bool is_physical(double tol = 1e-10) const { return physicality_margin() >= -tol; }
};

/// Affine moment map: mean → X·mean + d, cov → X·cov·Xᵀ + Y.
struct GaussianChannel {
  int mode_count = 0;
  Mat X;
  Mat Y;
  Vec d;

  static GaussianChannel identity(int modes) {
    const int n = 2 * modes;
    return {modes, Mat::Identity(n, n), Mat::Zero(n, n), Vec::Zero(n)};
  }

  /// Channel equivalent to applying `*this` first and then `next`.
  GaussianChannel then(const GaussianChannel& next) const {
    detail::require(next.mode_count == mode_count, ErrorKind::mode_count_mismatch,
                    "cannot compose channels on different mode counts");
    return {mode_count, next.X * X, next.X * Y * next.X.transpose() + next.Y, next.X * d + next.d};
  }

  /// max |XΩXᵀ − Ω|; zero for symplectic (unitary) channels.
  double symplectic_defect() const {
    const Mat omega = symplectic_form(mode_count);
    return (X * omega * X.transpose() - omega).cwiseAbs().maxCoeff();
  }

  /// Smallest eigenvalue of Y + (i/4)(Ω − XΩXᵀ); non-negative iff completely positive.
  double cp_margin() const {
    const Mat omega = symplectic_form(mode_count);
    return detail::min_hermitian_eigenvalue(Y, 0.25 * (omega - X * omega * X.transpose()));
  }
};

enum class InputKind { vacuum, coherent, squeezed_coherent };

/// Single-mode input: D(α)S(ζ)|0⟩ with α = alpha_mag·e^{i·alpha_phase}, ζ = r·e^{i·theta_s}.
struct InputSpec {
  InputKind kind = InputKind::vacuum;
  double alpha_mag = 0.0;
  double alpha_phase = 0.0;
  double r = 0.0;
  double theta_s = 0.0;

  static InputSpec vacuum() { return {}; }
  static InputSpec coherent(double mag, double phase = 0.0) {
    return {InputKind::coherent, mag, phase, 0.0, 0.0};
  }
  static InputSpec squeezed_coherent(double mag, double phase, double r, double theta_s = 0.0) {
    return {InputKind::squeezed_coherent, mag, phase, r, theta_s};
  }

  double n_alpha() const { return alpha_mag * alpha_mag; }
  Complex alpha() const { return std::polar(alpha_mag, alpha_phase); }

  void validate() const {
    detail::require_finite({alpha_mag, alpha_phase, r, theta_s}, "input spec");
    detail::require(alpha_mag >= 0.0, ErrorKind::invalid_argument, "input spec: |alpha| must be >= 0");
    detail::require(r >= 0.0, ErrorKind::invalid_argument, "input spec: r must be >= 0");
    if (kind == InputKind::vacuum) {
      detail::require(alpha_mag == 0.0 && r == 0.0, ErrorKind::invalid_argument,
                      "input spec: vacuum requires alpha_mag = r = 0");
    } else if (kind == InputKind::coherent) {
      detail::require(r == 0.0, ErrorKind::invalid_argument, "input spec: coherent requires r = 0");
    }
  }
};

inline GaussianState prepare_input(const InputSpec& spec) {
  spec.validate();
  GaussianState s = GaussianState::vacuum(1);
  s.mean << spec.alpha_mag * std::cos(spec.alpha_phase), spec.alpha_mag * std::sin(spec.alpha_phase);
  if (spec.kind == InputKind::squeezed_coherent) {
    // S(ζ) squeezes the quadrature at angle θ_s/2.
    const double c = std::cos(spec.theta_s);
    const double sn = std::sin(spec.theta_s);
    const double ch = std::cosh(2.0 * spec.r);
    const double sh = std::sinh(2.0 * spec.r);
    s.cov << ch - c * sh, -sn * sh,
             -sn * sh, ch + c * sh;
    s.cov *= 0.25;
  }
  return s;
}

/// Two-mode squeezer a' = u a + v b†, b' = u b + v a† with u = cosh g, v = e^{iθ} sinh g,
/// acting on the ordered pair (a, b).
inline GaussianChannel two_mode_squeezer(double g, double theta) {
  detail::require_finite({g, theta}, "two_mode_squeezer");
  const double ch = std::cosh(g);
  const double sc = std::sinh(g) * std::cos(theta);
  const double ss = std::sinh(g) * std::sin(theta);
  GaussianChannel ch2 = GaussianChannel::identity(2);
  ch2.X << ch, 0.0, sc, ss,
           0.0, ch, ss, -sc,
           sc, ss, ch, 0.0,
           ss, -sc, 0.0, ch;
  return ch2;
}

/// a → e^{iφ} a.
inline GaussianChannel phase_shift(double phi) {
  detail::require_finite({phi}, "phase_shift");
  GaussianChannel ch = GaussianChannel::identity(1);
  ch.X << std::cos(phi), -std::sin(phi),
          std::sin(phi), std::cos(phi);
  return ch;
}

/// Beam-splitter loss a → √T a + √(1−T) V with V in vacuum.
inline GaussianChannel loss(double transmission) {
  detail::require_finite({transmission}, "loss");
  detail::require(transmission >= 0.0 && transmission <= 1.0, ErrorKind::invalid_argument,
                  "loss: transmission must lie in [0, 1]");
  GaussianChannel ch = GaussianChannel::identity(1);
  ch.X *= std::sqrt(transmission);
  ch.Y = (kVacuumVariance * (1.0 - transmission)) * Mat::Identity(2, 2);
  return ch;
}

/// Collisional dephasing b → e^{−Γτ} b + F with ⟨FF†⟩ = 1 − e^{−2Γτ}, ⟨F†F⟩ = 0.
/// The Langevin noise is folded into Y, so this is loss with T = e^{−2Γτ}.
inline GaussianChannel dephase(double gamma_tau) {
  detail::require_finite({gamma_tau}, "dephase");
  detail::require(gamma_tau >= 0.0, ErrorKind::invalid_argument, "dephase: gamma_tau must be >= 0");
  return loss(std::exp(-2.0 * gamma_tau));
}

/// Applies `channel` to the listed modes of `state` (identity on the rest).
inline GaussianState apply(const GaussianChannel& channel, const GaussianState& state,
                           std::span<const int> modes) {
  detail::require(static_cast<int>(modes.size()) == channel.mode_count, ErrorKind::mode_count_mismatch,
                  "apply: channel acts on " + std::to_string(channel.mode_count) + " modes, got " +
                      std::to_string(modes.size()) + " indices");
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int m = modes[i];
    detail::require(m >= 0 && m < state.mode_count, ErrorKind::index_out_of_range,
                    "apply: mode index " + std::to_string(m) + " out of range");
    for (std::size_t j = 0; j < i; ++j) {
      detail::require(modes[j] != m, ErrorKind::invalid_argument, "apply: duplicate mode index");
    }
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }

  const int n = 2 * state.mode_count;
  Mat embed = Mat::Identity(n, n);
  Mat noise = Mat::Zero(n, n);
  Vec shift = Vec::Zero(n);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    shift(idx[i]) = channel.d(i);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      embed(idx[i], idx[j]) = channel.X(i, j);
      noise(idx[i], idx[j]) = channel.Y(i, j);
    }
  }

  GaussianState out{state.mode_count, embed * state.mean + shift,
                    embed * state.cov * embed.transpose() + noise};
  detail::symmetrize(out.cov);
  return out;
}

inline GaussianState apply(const GaussianChannel& channel, const GaussianState& state,
                           std::initializer_list<int> modes) {
  return apply(channel, state, std::span<const int>(modes.begin(), modes.size()));
}

struct ModeMoments {
  double mean_x;
  double mean_p;
  double var_x;
  double var_p;
  double cov_xp;
};

inline void check_mode(const GaussianState& state, int mode) {
  detail::require(mode >= 0 && mode < state.mode_count, ErrorKind::index_out_of_range,
                  "mode index " + std::to_string(mode) + " out of range");
}

inline ModeMoments moments(const GaussianState& state, int mode) {
  check_mode(state, mode);
  const int i = 2 * mode;
  return {state.mean(i), state.mean(i + 1), state.cov(i, i), state.cov(i + 1, i + 1), state.cov(i, i + 1)};
}

/// ⟨a†a⟩ = ⟨X²⟩ + ⟨P²⟩ − 1/2.
inline double photon_number(const GaussianState& state, int mode) {
  const ModeMoments m = moments(state, mode);
  return m.var_x + m.var_p + m.mean_x * m.mean_x + m.mean_p * m.mean_p - 0.5;
}

/// Linear correlation coefficient between the amplitude quadratures of two modes.
inline double lcc(const GaussianState& state, int mode_i, int mode_j) {
  check_mode(state, mode_i);
  check_mode(state, mode_j);
  const double var_i = state.cov(2 * mode_i, 2 * mode_i);
  const double var_j = state.cov(2 * mode_j, 2 * mode_j);
  detail::require(var_i > 0.0 && var_j > 0.0 && std::isfinite(var_i) && std::isfinite(var_j),
                  ErrorKind::undefined_lcc, "undefined LCC: zero-variance quadrature");
  const double j = state.cov(2 * mode_i, 2 * mode_j) / std::sqrt(var_i * var_j);
  return std::clamp(j, -1.0, 1.0);
}

}  // namespace su11

#endif  // SU11_GAUSSIAN_CORE_HPP
