#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "su11/interferometer.hpp"
#include "su11/sensitivity.hpp"

using namespace su11;
using su11::testing::Gen;
using su11::testing::kPi;

TEST(Config, BalancedPredicate) {
  InterferometerConfig c;
  EXPECT_TRUE(c.is_balanced());
  c.theta1 = 1.0;
  c.theta2 = 1.0 + kPi - 2.0 * 2.0 * kPi;
  EXPECT_TRUE(c.is_balanced(1e-12));
  c.g2 = 1.1;
  EXPECT_FALSE(c.is_balanced());
}

TEST(Config, Validation) {
  InterferometerConfig c;
  c.T = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c.T = 1.0;
  c.gamma_tau = -0.1;
  EXPECT_THROW(c.validate(), Error);
  c.gamma_tau = 0.0;
  c.g1 = -1.0;
  EXPECT_THROW(c.validate(), Error);
  c.g1 = std::nan("");
  EXPECT_THROW(c.validate(), Error);
}

TEST(Run, BalancedLosslessUndoesRp1) {
  Gen gen(201);
  for (int k = 0; k < 100; ++k) {
    InterferometerConfig c = gen.balanced_config();
    c.phi = 0.0;
    const RunResult r = run(c);
    const GaussianState in = input_state(c);
    EXPECT_LE((r.out.mean - in.mean).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((r.out.cov - in.cov).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, in.cov.cwiseAbs().maxCoeff()));
  }
}

TEST(Run, ZeroGainIsLossyPhaseShiftedInput) {
  InterferometerConfig c;
  c.g1 = c.g2 = 0.0;
  c.T = 0.64;
  c.phi = 0.4;
  c.gamma_tau = 0.3;
  c.input_a = InputSpec::squeezed_coherent(2.0, 0.1, 0.5, 0.2);
  const GaussianState expect =
      apply(phase_shift(0.4), apply(loss(0.64), prepare_input(c.input_a), {0}), {0});
  const RunResult r = run(c);
  EXPECT_LE((r.out.mean.head<2>() - expect.mean).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((r.out.cov.topLeftCorner<2, 2>() - expect.cov).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Run, VacuumUndoGivesZeroOutputPhotons) {
  InterferometerConfig c;
  const RunResult r = run(c);
  EXPECT_NEAR(photon_number(r.out, kModeA), 0.0, 1e-14);
  EXPECT_NEAR(photon_number(r.after_rp1, kModeA), std::pow(std::sinh(1.0), 2), 1e-14);
}

TEST(Run, StagesOrdering) {
  InterferometerConfig c;
  c.T = 0.5;
  c.gamma_tau = 0.2;
  c.input_a = InputSpec::coherent(2.0);
  const RunResult r = run(c);
  EXPECT_NEAR(photon_number(r.mid, kModeA), 0.5 * photon_number(r.after_rp1, kModeA), 1e-12);
  EXPECT_NEAR(photon_number(r.mid, kModeB), std::exp(-0.4) * photon_number(r.after_rp1, kModeB), 1e-12);
}

TEST(Coeffs, BalancedLosslessIsIdentity) {
  InterferometerConfig c = InterferometerConfig::balanced(0.8, InputSpec::coherent(1.0));
  c.theta1 = 0.7;
  c.theta2 = 0.7 + kPi;
  const CoeffSet cs = coeffs(c);
  EXPECT_TRUE(cs.lossless);
  EXPECT_LE(std::abs(cs.U1 - 1.0), 1e-12);
  EXPECT_LE(std::abs(cs.U2 - 1.0), 1e-12);
  EXPECT_LE(std::abs(cs.V1), 1e-12);
  EXPECT_LE(std::abs(cs.V2), 1e-12);
  EXPECT_LE(std::abs(cs.U - 1.0), 1e-12);
  EXPECT_LE(std::abs(cs.V), 1e-12);
}

TEST(Coeffs, LosslessCommutator) {
  Gen gen(202);
  for (int k = 0; k < 1000; ++k) {
    const CoeffSet cs = coeffs(gen.lossless_config());
    EXPECT_NEAR(std::norm(cs.U) - std::norm(cs.V), 1.0, 1e-12);
  }
}

TEST(Coeffs, LosslessClosedFormOfU) {
  Gen gen(203);
  for (int k = 0; k < 200; ++k) {
    const InterferometerConfig c = gen.lossless_config();
    const Complex i(0.0, 1.0);
    const Complex expected = (std::cosh(c.g1) * std::cosh(c.g2) * std::exp(i * (c.phi + c.theta1 - c.theta2)) +
                              std::sinh(c.g1) * std::sinh(c.g2)) *
                             std::exp(i * (c.theta2 - c.theta1));
    EXPECT_LE(std::abs(coeffs(c).U - expected), 1e-12 * std::abs(expected));
  }
}

TEST(Coeffs, EngineAgreesWithClosedForm) {
  Gen gen(204);
  for (int k = 0; k < 1000; ++k) {
    const InterferometerConfig c = gen.config();
    const CoeffSet cs = coeffs(c);
    const RunResult r = run(c);
    EXPECT_LE(relative_gap(r.out.mean(0), closed_form_mean_x(c, cs), 1.0), 1e-10);
    EXPECT_LE(relative_gap(r.out.cov(0, 0), closed_form_var_x(c, cs)), 1e-10);
  }
}

TEST(Coeffs, OutputModeBFollowsItsCoefficients) {
  // b̂₂ = e^{−iφ}[U₂ b̂₀ + V₂ â₀†] + noise; with vacuum b̂₀ the X_b mean is Re(e^{−iφ} V₂ α*).
  Gen gen(205);
  for (int k = 0; k < 200; ++k) {
    InterferometerConfig c = gen.config();
    const CoeffSet cs = coeffs(c);
    const double expected = std::real(std::polar(1.0, -c.phi) * cs.V2 * std::conj(c.input_a.alpha()));
    EXPECT_LE(relative_gap(run(c).out.mean(2), expected, 1.0), 1e-10);
  }
}

TEST(PhaseSensingNumber, VacuumInputs) {
  InterferometerConfig c;
  const PhaseSensingNumber n = phase_sensing_number(c);
  EXPECT_NEAR(n.n_ph, 2.762196, 1e-6);
  EXPECT_NEAR(n.n_ph, raman_gain(1.0), 1e-13);
  EXPECT_NEAR(n.n_photon, n.n_atom, 1e-14);
}

TEST(PhaseSensingNumber, CoherentInput) {
  InterferometerConfig c = InterferometerConfig::balanced(1.0, InputSpec::coherent(2.0, 0.3));
  EXPECT_NEAR(phase_sensing_number(c).n_ph, 17.810978, 1e-6);
  EXPECT_NEAR(phase_sensing_number(c).n_ph, probe_number_closed_form(4.0, 1.0), 1e-12);
}

TEST(PhaseSensingNumber, MatchesClosedFormForVacuumSpinWave) {
  Gen gen(206);
  for (int k = 0; k < 1000; ++k) {
    const InterferometerConfig c = gen.config();
    const double expected = probe_number_closed_form(input_photon_number(c.input_a), c.g1);
    EXPECT_LE(relative_gap(phase_sensing_number(c).n_ph, expected, 1.0), 1e-12);
  }
}

TEST(PhaseSensingNumber, HighGainApproximation) {
  const double r = 2.5;
  InterferometerConfig c = InterferometerConfig::balanced(3.0, InputSpec::squeezed_coherent(std::exp(r) / 2, 0.0, r));
  const double approx = 2.0 * raman_gain(3.0) * c.input_a.n_alpha();
  EXPECT_LE(relative_gap(phase_sensing_number(c).n_ph, approx), 0.05);
}

TEST(PhaseSensingNumber, PostLossCountsSurvivingQuanta) {
  InterferometerConfig c = InterferometerConfig::balanced(1.0, InputSpec::coherent(2.0));
  c.T = 0.5;
  c.gamma_tau = 0.1;
  const PhaseSensingNumber pre = phase_sensing_number(c);
  const PhaseSensingNumber post = phase_sensing_number_post_loss(c);
  EXPECT_NEAR(post.n_photon, 0.5 * pre.n_photon, 1e-12);
  EXPECT_NEAR(post.n_atom, std::exp(-0.2) * pre.n_atom, 1e-12);
}

TEST(Lcc, Rp1MatchesCosThetaTanh) {
  for (double g : {0.1, 0.5, 1.0, 2.0}) {
    for (double th : {0.0, 0.4, kPi / 2, 2.5, kPi}) {
      InterferometerConfig c;
      c.g1 = g;
      c.theta1 = th;
      EXPECT_NEAR(lcc_rp1(c), std::cos(th) * std::tanh(2 * g), 1e-10);
    }
  }
  InterferometerConfig c;
  c.g1 = 0.5;
  EXPECT_NEAR(lcc_rp1(c), 0.761594, 1e-6);
}

TEST(Lcc, BalancedOutputDecorrelated) {
  Gen gen(207);
  for (int k = 0; k < 100; ++k) {
    InterferometerConfig c = gen.balanced_config();
    c.phi = 0.0;
    EXPECT_NEAR(lcc_out(c), 0.0, 1e-12);
  }
}

TEST(Lcc, PhaseBreaksDecorrelation) {
  InterferometerConfig c = InterferometerConfig::balanced(1.0, InputSpec::coherent(2.0));
  c.phi = 0.3;
  EXPECT_GT(std::abs(lcc_out(c)), 1e-3);
}

TEST(Properties, OutputsArePeriodicInPhi) {
  Gen gen(208);
  for (int k = 0; k < 100; ++k) {
    InterferometerConfig c = gen.config();
    const RunResult a = run(c);
    c.phi += 2.0 * kPi;
    const RunResult b = run(c);
    const double scale = std::max(1.0, a.out.cov.cwiseAbs().maxCoeff());
    EXPECT_LE((a.out.mean - b.out.mean).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, a.out.mean.norm()));
    EXPECT_LE((a.out.cov - b.out.cov).cwiseAbs().maxCoeff(), 1e-10 * scale);
  }
}

TEST(Properties, StatesStayPhysical) {
  Gen gen(209);
  for (int k = 0; k < 1000; ++k) {
    const RunResult r = run(gen.config());
    const double scale = r.out.cov.cwiseAbs().maxCoeff();
    EXPECT_GE(r.out.physicality_margin(), -1e-10 * std::max(1.0, scale));
    EXPECT_GE(r.mid.physicality_margin(), -1e-10 * std::max(1.0, scale));
  }
}

TEST(SpinWave, CoherentSeedIsAccepted) {
  InterferometerConfig c;
  c.input_b = InputSpec::coherent(1.0, 0.2);
  EXPECT_NO_THROW(run(c));
  c.input_b = InputSpec::squeezed_coherent(1.0, 0.2, 0.3);
  EXPECT_THROW(c.validate(), Error);
}
