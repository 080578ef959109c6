#ifndef SU11_FOCK_ORACLE_HPP
#define SU11_FOCK_ORACLE_HPP

// Brute-force truncated Fock-space simulator of the interferometer. It shares
// no code path with the Gaussian engine beyond the configuration struct:
// states are two-mode density matrices over |n_a, n_b⟩ with n < cutoff,
// Raman pulses are matrix exponentials of the two-mode squeezing generator,
// and loss/dephasing are Kraus maps. Intended for small gains and amplitudes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "su11/error.hpp"
#include "su11/interferometer.hpp"

namespace su11::fock {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<Complex>;

inline constexpr double kDefaultLeakageThreshold = 1e-8;
inline constexpr int kDefaultCutoff = 30;

/// exp(A) by scaling and squaring with a Taylor core.
inline CMat expm(const CMat& a) {
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMat scaled = a / std::ldexp(1.0, squarings);

  CMat result = CMat::Identity(a.rows(), a.cols());
  CMat term = CMat::Identity(a.rows(), a.cols());
  for (int k = 1; k < 40; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

/// Single-mode annihilation operator on d levels.
inline CMat annihilation(int d) {
  CMat a = CMat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Two-mode density matrix over |n_a, n_b⟩, flattened as n_a·cutoff + n_b.
struct FockDensityMatrix {
  int cutoff = 0;
  CMat rho;

  int index(int na, int nb) const { return na * cutoff + nb; }

  double trace() const { return rho.trace().real(); }

  double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMat> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  /// Population with either mode at the top level n = cutoff − 1.
  double edge_population() const {
    double p = 0.0;
    for (int n = 0; n < cutoff; ++n) {
      p += rho(index(cutoff - 1, n), index(cutoff - 1, n)).real();
      if (n != cutoff - 1) p += rho(index(n, cutoff - 1), index(n, cutoff - 1)).real();
    }
    return p;
  }

  static FockDensityMatrix product_pure(const CVec& psi_a, const CVec& psi_b) {
    const int d = static_cast<int>(psi_a.size());
    CVec psi(d * d);
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb) psi(na * d + nb) = psi_a(na) * psi_b(nb);
    return {d, psi * psi.adjoint()};
  }
};

struct PreparedInput {
  CVec psi;
  double leakage;  // norm lost to truncation, before renormalization
};

/// D(α)S(ζ)|0⟩ built by matrix exponentials in an enlarged space, then truncated to `cutoff`.
inline PreparedInput prepare_input(const InputSpec& spec, int cutoff, int headroom = 40) {
  spec.validate();
  const int work = cutoff + headroom;
  const CMat a = annihilation(work);
  const CMat ad = a.adjoint();
  const Complex zeta = std::polar(spec.r, spec.theta_s);
  const Complex alpha = spec.alpha();
  const CMat squeeze = expm(0.5 * (std::conj(zeta) * a * a - zeta * ad * ad));
  const CMat displace = expm(alpha * ad - std::conj(alpha) * a);
  CVec vac = CVec::Zero(work);
  vac(0) = 1.0;
  const CVec full = displace * (squeeze * vac);
  CVec psi = full.head(cutoff);
  const double kept = psi.squaredNorm();
  psi /= std::sqrt(kept);
  return {psi, std::max(0.0, 1.0 - kept)};
}

/// exp(ζ a†b† − ζ* ab), ζ = g·e^{iθ}, stored as blocks over the invariant
/// sectors n_a − n_b = const. Heisenberg action: a → cosh g·a + e^{iθ}sinh g·b†.
struct TwoModeUnitary {
  int cutoff = 0;
  std::vector<std::vector<int>> sectors;  // flattened basis indices per sector
  std::vector<CMat> blocks;

  CMat dense() const {
    CMat u = CMat::Zero(cutoff * cutoff, cutoff * cutoff);
    for (std::size_t s = 0; s < sectors.size(); ++s) {
      const auto& idx = sectors[s];
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) u(idx[i], idx[j]) = blocks[s](i, j);
    }
    return u;
  }

  /// max |U†U − I| over all blocks.
  double unitarity_defect() const {
    double worst = 0.0;
    for (const CMat& b : blocks) {
      worst = std::max(worst, (b.adjoint() * b - CMat::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff());
    }
    return worst;
  }
};

inline TwoModeUnitary tms_unitary(double g, double theta, int cutoff,
                                  double leakage_threshold = kDefaultLeakageThreshold) {
  detail::require(cutoff >= 2, ErrorKind::invalid_argument, "tms_unitary: cutoff must be >= 2");
  detail::require_finite({g, theta}, "tms_unitary");
  const Complex zeta = std::polar(g, theta);
  TwoModeUnitary u;
  u.cutoff = cutoff;
  double vacuum_edge = 0.0;
  for (int diff = -(cutoff - 1); diff <= cutoff - 1; ++diff) {
    const int na0 = std::max(0, diff);
    const int nb0 = na0 - diff;
    const int len = cutoff - std::max(na0, nb0);
    std::vector<int> idx(len);
    CMat gen = CMat::Zero(len, len);
    for (int k = 0; k < len; ++k) {
      idx[k] = (na0 + k) * cutoff + (nb0 + k);
      if (k + 1 < len) {
        const double amp = std::sqrt(static_cast<double>((na0 + k + 1) * (nb0 + k + 1)));
        gen(k + 1, k) = zeta * amp;
        gen(k, k + 1) = -std::conj(zeta) * amp;
      }
    }
    CMat block = expm(gen);
    if (diff == 0) vacuum_edge = std::norm(block(len - 1, 0));
    u.sectors.push_back(std::move(idx));
    u.blocks.push_back(std::move(block));
  }
  detail::require(vacuum_edge <= leakage_threshold, ErrorKind::truncation_leakage,
                  "tms_unitary: truncation leakage " + std::to_string(vacuum_edge) + " exceeds threshold");
  return u;
}

/// Kraus set of the loss a → √T a + √(1−T) V:
/// K_k = Σ_n √C(n,k) T^{(n−k)/2} (1−T)^{k/2} |n−k⟩⟨n|, k = 0..cutoff−1.
struct LossKraus {
  int cutoff = 0;
  // weights[k][n] multiplies |n−k⟩⟨n|.
  std::vector<std::vector<double>> weights;

  std::size_t size() const { return weights.size(); }

  CMat dense(std::size_t k) const {
    CMat m = CMat::Zero(cutoff, cutoff);
    for (int n = static_cast<int>(k); n < cutoff; ++n) m(n - k, n) = weights[k][n];
    return m;
  }

  /// max |Σ K†K − I|.
  double completeness_defect() const {
    CMat sum = CMat::Zero(cutoff, cutoff);
    for (std::size_t k = 0; k < size(); ++k) sum += dense(k).adjoint() * dense(k);
    return (sum - CMat::Identity(cutoff, cutoff)).cwiseAbs().maxCoeff();
  }
};

inline LossKraus loss_kraus(double transmission, int cutoff) {
  detail::require_finite({transmission}, "loss_kraus");
  detail::require(transmission >= 0.0 && transmission <= 1.0, ErrorKind::invalid_argument,
                  "loss_kraus: transmission must lie in [0, 1]");
  LossKraus kraus;
  kraus.cutoff = cutoff;
  const int count = transmission == 1.0 ? 1 : cutoff;
  const double r = 1.0 - transmission;
  for (int k = 0; k < count; ++k) {
    std::vector<double> w(cutoff, 0.0);
    for (int n = k; n < cutoff; ++n) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      // pow(0, 0) = 1 covers the T = 0 and T = 1 corners.
      w[n] = std::exp(0.5 * log_binom) * std::pow(transmission, 0.5 * (n - k)) * std::pow(r, 0.5 * k);
    }
    kraus.weights.push_back(std::move(w));
  }
  return kraus;
}

/// ρ → U ρ U†.
inline FockDensityMatrix apply_channel(const FockDensityMatrix& state, const TwoModeUnitary& u) {
  detail::require(state.cutoff == u.cutoff, ErrorKind::invalid_argument, "apply_channel: cutoff mismatch");
  FockDensityMatrix out{state.cutoff, CMat::Zero(state.rho.rows(), state.rho.cols())};
  for (std::size_t s1 = 0; s1 < u.sectors.size(); ++s1) {
    const auto& i1 = u.sectors[s1];
    for (std::size_t s2 = 0; s2 < u.sectors.size(); ++s2) {
      const auto& i2 = u.sectors[s2];
      CMat sub(i1.size(), i2.size());
      for (std::size_t a = 0; a < i1.size(); ++a)
        for (std::size_t b = 0; b < i2.size(); ++b) sub(a, b) = state.rho(i1[a], i2[b]);
      const CMat rotated = u.blocks[s1] * sub * u.blocks[s2].adjoint();
      for (std::size_t a = 0; a < i1.size(); ++a)
        for (std::size_t b = 0; b < i2.size(); ++b) out.rho(i1[a], i2[b]) = rotated(a, b);
    }
  }
  return out;
}

/// ρ → Σ_k K_k ρ K_k† on one mode (0 = a, 1 = b).
inline FockDensityMatrix apply_channel(const FockDensityMatrix& state, const LossKraus& kraus, int mode) {
  detail::require(state.cutoff == kraus.cutoff, ErrorKind::invalid_argument, "apply_channel: cutoff mismatch");
  detail::require(mode == 0 || mode == 1, ErrorKind::index_out_of_range, "apply_channel: mode must be 0 or 1");
  const int d = state.cutoff;
  FockDensityMatrix out{d, CMat::Zero(state.rho.rows(), state.rho.cols())};
  auto idx = [d, mode](int acted, int spectator) {
    return mode == 0 ? acted * d + spectator : spectator * d + acted;
  };
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      for (std::size_t k = 0; k < kraus.size(); ++k) {
        const int nk = n + static_cast<int>(k);
        const int mk = m + static_cast<int>(k);
        if (nk >= d || mk >= d) break;
        const double w = kraus.weights[k][nk] * kraus.weights[k][mk];
        if (w == 0.0) continue;
        for (int s = 0; s < d; ++s)
          for (int t = 0; t < d; ++t) out.rho(idx(n, s), idx(m, t)) += w * state.rho(idx(nk, s), idx(mk, t));
      }
    }
  }
  return out;
}

/// a → e^{iφ} a on one mode.
inline FockDensityMatrix apply_phase(const FockDensityMatrix& state, double phi, int mode) {
  const int d = state.cutoff;
  FockDensityMatrix out = state;
  for (int na = 0; na < d; ++na)
    for (int nb = 0; nb < d; ++nb)
      for (int ma = 0; ma < d; ++ma)
        for (int mb = 0; mb < d; ++mb) {
          const int dn = mode == 0 ? na - ma : nb - mb;
          if (dn != 0) out.rho(na * d + nb, ma * d + mb) *= std::polar(1.0, phi * dn);
        }
  return out;
}

/// First and second moments of both modes, in the same layout as GaussianState.
struct FockMoments {
  Vec mean = Vec::Zero(4);
  Mat cov = Mat::Zero(4, 4);
  double n_a = 0.0;
  double n_b = 0.0;
  double lcc = 0.0;
  double trace = 0.0;
};

inline FockMoments measure(const FockDensityMatrix& state) {
  const int d = state.cutoff;
  std::vector<Eigen::Triplet<Complex>> ta, tb;
  for (int n = 1; n < d; ++n) {
    const double amp = std::sqrt(static_cast<double>(n));
    for (int s = 0; s < d; ++s) {
      ta.emplace_back((n - 1) * d + s, n * d + s, amp);
      tb.emplace_back(s * d + n - 1, s * d + n, amp);
    }
  }
  SparseOp a(d * d, d * d), b(d * d, d * d);
  a.setFromTriplets(ta.begin(), ta.end());
  b.setFromTriplets(tb.begin(), tb.end());
  const SparseOp ad = SparseOp(a.adjoint());
  const SparseOp bd = SparseOp(b.adjoint());
  const Complex two_i(0.0, 2.0);
  const SparseOp quad[4] = {
      SparseOp(0.5 * (a + ad)), SparseOp((a - ad) / two_i),
      SparseOp(0.5 * (b + bd)), SparseOp((b - bd) / two_i),
  };

  auto expect = [&](const SparseOp& op) {
    Complex acc = 0.0;
    for (int col = 0; col < op.outerSize(); ++col)
      for (SparseOp::InnerIterator it(op, col); it; ++it) acc += it.value() * state.rho(it.col(), it.row());
    return acc;
  };

  FockMoments m;
  m.trace = state.trace();
  for (int i = 0; i < 4; ++i) m.mean(i) = expect(quad[i]).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const SparseOp prod = quad[i] * quad[j];
      m.cov(i, j) = m.cov(j, i) = expect(prod).real() - m.mean(i) * m.mean(j);
    }
  }
  m.n_a = expect(SparseOp(ad * a)).real();
  m.n_b = expect(SparseOp(bd * b)).real();
  m.lcc = m.cov(0, 2) / std::sqrt(m.cov(0, 0) * m.cov(2, 2));
  return m;
}

struct FockRun {
  FockMoments after_rp1;
  FockMoments out;
  double leakage = 0.0;  // worst truncation diagnostic over all stages
  int cutoff = 0;
  bool valid = false;
};

/// Full pipeline without throwing on truncation; `valid` reports the leakage check.
inline FockRun simulate_run(const InterferometerConfig& config, int cutoff = kDefaultCutoff,
                            double leakage_threshold = kDefaultLeakageThreshold) {
  config.validate();
  detail::require(cutoff >= 2, ErrorKind::invalid_argument, "simulate: cutoff must be >= 2");
  FockRun run;
  run.cutoff = cutoff;
  const PreparedInput in_a = prepare_input(config.input_a, cutoff);
  const PreparedInput in_b = prepare_input(config.input_b, cutoff);
  run.leakage = std::max(in_a.leakage, in_b.leakage);

  FockDensityMatrix rho = FockDensityMatrix::product_pure(in_a.psi, in_b.psi);
  auto track = [&](const FockDensityMatrix& s) { run.leakage = std::max(run.leakage, s.edge_population()); };
  track(rho);

  // The unitaries are built with an infinite threshold; the state-based edge check governs validity.
  rho = apply_channel(rho, tms_unitary(config.g1, config.theta1, cutoff, 1.0));
  track(rho);
  run.after_rp1 = measure(rho);
  rho = apply_channel(rho, loss_kraus(config.T, cutoff), 0);
  rho = apply_phase(rho, config.phi, 0);
  rho = apply_channel(rho, loss_kraus(std::exp(-2.0 * config.gamma_tau), cutoff), 1);
  track(rho);
  rho = apply_channel(rho, tms_unitary(config.g2, config.theta2, cutoff, 1.0));
  track(rho);
  run.out = measure(rho);
  run.valid = run.leakage <= leakage_threshold;
  return run;
}

inline FockRun simulate(const InterferometerConfig& config, int cutoff = kDefaultCutoff,
                        double leakage_threshold = kDefaultLeakageThreshold) {
  FockRun r = simulate_run(config, cutoff, leakage_threshold);
  detail::require(r.valid, ErrorKind::truncation_leakage,
                  "simulate: truncation leakage " + std::to_string(r.leakage) + " exceeds threshold at cutoff " +
                      std::to_string(cutoff));
  return r;
}

/// Var(n) of one mode of a Gaussian state: 2Tr(V²) + 4μᵀVμ − 1/4.
inline double gaussian_number_variance(const GaussianState& s, int mode) {
  const Eigen::Matrix2d v = s.cov.block<2, 2>(2 * mode, 2 * mode);
  const Eigen::Vector2d mu = s.mean.segment<2>(2 * mode);
  return 2.0 * (v * v).trace() + 4.0 * mu.dot(v * mu) - 0.25;
}

/// Cutoff suggested by the Gaussian engine: max over stages and modes of ⌈⟨n⟩ + 6√Var n⌉.
inline int recommended_cutoff(const InterferometerConfig& config) {
  const RunResult r = run(config);
  double need = 2.0;
  for (const GaussianState* s : {&r.after_rp1, &r.mid, &r.out}) {
    for (int m = 0; m < 2; ++m) {
      need = std::max(need, photon_number(*s, m) + 6.0 * std::sqrt(std::max(0.0, gaussian_number_variance(*s, m))));
    }
  }
  return static_cast<int>(std::ceil(need));
}

}  // namespace su11::fock

#endif  // SU11_FOCK_ORACLE_HPP
