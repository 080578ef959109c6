#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "su11/sensitivity.hpp"

using namespace su11;
using su11::testing::Gen;
using su11::testing::kPi;

namespace {

InterferometerConfig optimal_coherent(double n_alpha, double g) {
  return InterferometerConfig::balanced(g, InputSpec::coherent(std::sqrt(n_alpha), kPi / 2));
}

InterferometerConfig optimal_squeezed(double n_alpha, double g, double r) {
  return InterferometerConfig::balanced(g, InputSpec::squeezed_coherent(std::sqrt(n_alpha), kPi / 2, r, 0.0));
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no su11::Error thrown";
  return ErrorKind::config;
}

}  // namespace

TEST(Slope, MaximumSlopeValue) {
  const InterferometerConfig c = optimal_coherent(4.0, 1.0);
  EXPECT_NEAR(std::abs(analytic_slope(c)), 4.762196, 1e-6);
  EXPECT_NEAR(std::abs(analytic_slope(c)), balanced_slope_magnitude(c), 1e-13);
  EXPECT_NEAR(std::abs(numeric_slope(c)), 4.762196, 1e-6);
}

TEST(Slope, VanishesWhenSinFactorDoes) {
  InterferometerConfig c = optimal_coherent(4.0, 1.0);
  c.input_a.alpha_phase = 0.0;
  EXPECT_NEAR(analytic_slope(c), 0.0, 1e-14);
  EXPECT_EQ(kind_of([&] { delta_phi(c); }), ErrorKind::non_informative_point);
}

TEST(Slope, ScalesWithRootTransmission) {
  InterferometerConfig c = optimal_coherent(4.0, 1.0);
  const double full = analytic_slope(c);
  c.T = 0.5;
  c.gamma_tau = 0.7;
  EXPECT_NEAR(analytic_slope(c), full / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(numeric_slope(c), full / std::sqrt(2.0), 1e-8);
}

TEST(Slope, StepUnderflow) {
  EXPECT_EQ(kind_of([] { numeric_slope(InterferometerConfig{}, 1e-10); }), ErrorKind::step_underflow);
  EXPECT_NO_THROW(numeric_slope(InterferometerConfig{}, 1e-9));
}

TEST(Slope, FiniteDifferenceMatchesAnalyticOnBalancedConfigs) {
  Gen gen(301);
  int compared = 0;
  for (int k = 0; k < 1000; ++k) {
    InterferometerConfig c = gen.balanced_config();
    c.T = gen.uniform(0.0, 1.0);
    c.gamma_tau = gen.uniform(0.0, 2.0);
    const SlopeResult s = slope(c);
    EXPECT_NEAR(std::abs(s.analytic), balanced_slope_magnitude(c), 1e-12 * std::max(1.0, std::abs(s.analytic)));
    if (std::abs(s.analytic) < 1e-3) continue;
    ++compared;
    EXPECT_LE(relative_gap(s.analytic, s.numeric), 1e-6) << k;
  }
  EXPECT_GT(compared, 500);
}

TEST(OutputVariance, BalancedCoherentIsVacuumNoise) {
  const VarianceResult v = output_variance(optimal_coherent(100.0, 1.3));
  EXPECT_NEAR(v.engine, 0.25, 1e-12);
  EXPECT_NEAR(v.closed_form, 0.25, 1e-12);
}

TEST(OutputVariance, BalancedSqueezedIsSqueezedNoise) {
  const VarianceResult v = output_variance(optimal_squeezed(100.0, 1.3, 1.0));
  EXPECT_NEAR(v.engine, 0.033834, 1e-6);
  EXPECT_NEAR(v.closed_form, std::exp(-2.0) / 4, 1e-12);
}

TEST(OutputVariance, FullLossWithoutSecondGainIsVacuum) {
  Gen gen(302);
  for (int k = 0; k < 50; ++k) {
    InterferometerConfig c = gen.config();
    c.T = 0.0;
    c.g2 = 0.0;
    const VarianceResult v = output_variance(c);
    EXPECT_NEAR(v.engine, 0.25, 1e-12);
    EXPECT_NEAR(v.closed_form, 0.25, 1e-12);
  }
}

TEST(OutputVariance, PathsAgree) {
  Gen gen(303);
  for (int k = 0; k < 1000; ++k) {
    const VarianceResult v = output_variance(gen.config());
    EXPECT_LE(relative_gap(v.engine, v.closed_form), 1e-10);
  }
}

TEST(DeltaPhi, CoherentOptimum) {
  const SensitivityReport rep = delta_phi(optimal_coherent(100.0, 1.0));
  EXPECT_NEAR(rep.delta_phi, 0.0209987, 1e-7);
  EXPECT_NEAR(rep.delta_phi, optimal_delta_phi_coherent(100.0, 1.0), 1e-14);
}

TEST(DeltaPhi, SqueezedOptimum) {
  const SensitivityReport rep = delta_phi(optimal_squeezed(100.0, 1.0, 1.0));
  EXPECT_NEAR(rep.delta_phi, 0.0077250, 1e-7);
  EXPECT_NEAR(rep.delta_phi, optimal_delta_phi_squeezed(100.0, 1.0, 1.0), 1e-14);
}

TEST(DeltaPhi, BareCoherentLimit) {
  for (double n : {1.0, 10.0, 1e4}) {
    EXPECT_NEAR(delta_phi(optimal_coherent(n, 0.0)).delta_phi, 1.0 / (2.0 * std::sqrt(n)), 1e-14);
  }
}

TEST(DeltaPhi, ReportInvariants) {
  Gen gen(304);
  for (int k = 0; k < 500; ++k) {
    InterferometerConfig c = gen.config();
    if (c.input_a.kind == InputKind::vacuum) continue;
    if (std::abs(analytic_slope(c)) <= kZeroSlope) continue;
    const SensitivityReport rep = delta_phi(c);
    EXPECT_EQ(rep.delta_phi, std::sqrt(rep.var_x) / std::abs(rep.slope));
    EXPECT_EQ(rep.sql, 1.0 / std::sqrt(rep.n_ph));
    EXPECT_EQ(rep.hl, 1.0 / rep.n_ph);
    EXPECT_LE(rep.path_disagreement, 1e-6);
  }
}

TEST(DeltaPhi, VacuumInputIsNonInformative) {
  EXPECT_EQ(kind_of([] { delta_phi(InterferometerConfig{}); }), ErrorKind::non_informative_point);
}

TEST(DeltaPhi, BaselineSelection) {
  InterferometerConfig c = optimal_squeezed(100.0, 1.0, 1.0);
  c.T = 0.5;
  EXPECT_NEAR(delta_phi(c, Baseline::pre_loss).n_ph, phase_sensing_number(c).n_ph, 1e-12);
  EXPECT_NEAR(delta_phi(c, Baseline::post_loss).n_ph, phase_sensing_number_post_loss(c).n_ph, 1e-12);
}

TEST(Limits, Values) {
  const Limits l = limits(100.0);
  EXPECT_DOUBLE_EQ(l.sql, 0.1);
  EXPECT_DOUBLE_EQ(l.hl, 0.01);
  EXPECT_THROW(limits(0.0), Error);
  EXPECT_THROW(limits(-1.0), Error);
}

TEST(HlRatio, SqueezedApproachesHeisenbergAtHighGain) {
  const double r = 2.5;
  const double n_alpha = std::exp(2 * r) / 4;
  const double ratio = hl_ratio(optimal_squeezed(n_alpha, 3.0, r));
  EXPECT_NEAR(ratio, 0.990, 0.02 * 0.990);
  // Exact value of the model at this point.
  EXPECT_NEAR(ratio, 1.00173, 1e-5);
}

TEST(HlRatio, CoherentBeatsSqlButNotHl) {
  const double r = 2.5;
  const double n_alpha = std::exp(2 * r) / 4;
  const SensitivityReport rep = delta_phi(optimal_coherent(n_alpha, 3.0));
  EXPECT_LT(rep.delta_phi / rep.sql, 1.0);
  EXPECT_GT(rep.delta_phi * rep.n_ph, 5.0);
  EXPECT_NEAR(rep.delta_phi * rep.n_ph, 6.22375, 1e-5);
}

TEST(HlRatio, ConvergesWithSqueezingAtFixedGain) {
  // With N_α = e^{2r}/4 the exact ratio tends to cosh(2g)/(2cosh²g) as r grows;
  // tanh²g is its large-g form.
  for (double g : {1.0, 2.0, 3.0}) {
    const double limit = std::cosh(2 * g) / (2 * std::pow(std::cosh(g), 2));
    double prev_gap = INFINITY;
    for (double r : {2.0, 2.5, 3.0}) {
      const double gap = std::abs(hl_ratio(optimal_squeezed(std::exp(2 * r) / 4, g, r)) - limit);
      EXPECT_LT(gap, prev_gap) << g << ' ' << r;
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap / limit, 0.01) << g;
  }
  EXPECT_NEAR(std::cosh(6.0) / (2 * std::pow(std::cosh(3.0), 2)), std::pow(std::tanh(3.0), 2), 0.01);
}

TEST(Properties, MonotoneAlongLossAndDephasingEdges) {
  // Δφ falls as T → 1 at Γτ = 0 and rises with Γτ at T = 1, on 50-point grids.
  for (const InterferometerConfig& base : {optimal_squeezed(std::exp(5.0) / 4, 2.0, 2.5), optimal_coherent(100.0, 1.0),
                                           optimal_squeezed(100.0, 1.0, 1.0)}) {
    double prev = INFINITY;
    for (int i = 1; i <= 50; ++i) {
      InterferometerConfig c = base;
      c.T = i / 50.0;
      const double v = delta_phi(c).delta_phi;
      EXPECT_LE(v, prev * (1 + 1e-12)) << c.T;
      prev = v;
    }
    prev = 0.0;
    for (int j = 0; j < 50; ++j) {
      InterferometerConfig c = base;
      c.gamma_tau = j / 49.0;
      const double v = delta_phi(c).delta_phi;
      EXPECT_GE(v, prev * (1 - 1e-12)) << c.gamma_tau;
      prev = v;
    }
  }
}

TEST(Properties, MonotonicityFailsInTheInterior) {
  // With both imperfections present the joint grid is not monotone: dephasing
  // damps amplified atomic noise at small T, and at g = 2 the optimum in T
  // moves inside (0, 1) once Γτ > 0.
  InterferometerConfig c = optimal_squeezed(std::exp(5.0) / 4, 2.0, 2.5);
  c.T = 0.02;
  const double clean = delta_phi(c).delta_phi;
  c.gamma_tau = 0.5;
  EXPECT_LT(delta_phi(c).delta_phi, clean);
  c.T = 0.6;
  const double mid = delta_phi(c).delta_phi;
  c.T = 1.0;
  EXPECT_GT(delta_phi(c).delta_phi, mid);
}

TEST(Properties, NoSuperHeisenbergLosslessCoherent) {
  Gen gen(305);
  for (int k = 0; k < 1000; ++k) {
    InterferometerConfig c = gen.lossless_config();
    c.input_a = InputSpec::coherent(gen.uniform(2.0, 30.0), gen.angle());
    if (std::abs(analytic_slope(c)) < 1e-6) continue;
    const SensitivityReport rep = delta_phi(c);
    EXPECT_GE(rep.delta_phi, rep.hl - 1e-12) << k;
  }
}

TEST(Properties, SqueezedHighGainPinned) {
  // Lossless squeezed reports can dip below 1/n_ph; this point pins the model value.
  const double r = 2.5;
  EXPECT_NEAR(hl_ratio(optimal_squeezed(std::exp(2 * r) / 4, 2.0, r)), 0.97072, 1e-5);
}

TEST(Optimize, CoherentPhase) {
  for (double g : {0.5, 1.0, 2.0}) {
    for (double n : {10.0, 100.0}) {
      InterferometerConfig c = optimal_coherent(n, g);
      c.phi = 1.0;
      const OptimizeResult res = optimize(c, {FreeParam::phi});
      EXPECT_LE(relative_gap(res.delta_phi_min, optimal_delta_phi_coherent(n, g)), 1e-6);
      EXPECT_NEAR(res.argmin[0], 0.0, 1e-3);
    }
  }
}

TEST(Optimize, SqueezedPhaseAndSqueezingAngle) {
  for (double g : {0.5, 2.0}) {
    for (double r : {0.5, 2.5}) {
      InterferometerConfig c = optimal_squeezed(100.0, g, r);
      c.phi = 0.4;
      c.input_a.theta_s = 2.0;
      const OptimizeResult res = optimize(c, {FreeParam::phi, FreeParam::theta_s});
      EXPECT_LE(relative_gap(res.delta_phi_min, optimal_delta_phi_squeezed(100.0, g, r)), 1e-6) << g << ' ' << r;
    }
  }
}

TEST(Optimize, LossRaisesMinimum) {
  InterferometerConfig c = optimal_squeezed(100.0, 1.0, 1.0);
  const double lossless = optimize(c, {FreeParam::phi}).delta_phi_min;
  c.T = 0.9;
  EXPECT_GT(optimize(c, {FreeParam::phi}).delta_phi_min, lossless);
  c.T = 1.0;
  c.gamma_tau = 0.1;
  EXPECT_GT(optimize(c, {FreeParam::phi}).delta_phi_min, lossless);
}

TEST(Optimize, FlatLandscapeIsReported) {
  EXPECT_EQ(kind_of([] { optimize(optimal_coherent(100.0, 1.0), {FreeParam::theta_s}); }), ErrorKind::flat_landscape);
}

TEST(Optimize, RejectsBadRequests) {
  EXPECT_THROW(optimize(optimal_coherent(100.0, 1.0), {}), Error);
  EXPECT_THROW(optimize(optimal_coherent(100.0, 1.0), {FreeParam::phi, FreeParam::phi}), Error);
  EXPECT_EQ(kind_of([] { optimize(InterferometerConfig{}, {FreeParam::phi}); }), ErrorKind::non_informative_point);
}

TEST(Optimize, DeterministicTieBreak) {
  // Δφ for a coherent input is symmetric under θ_α → θ_α + π; the smaller angle wins.
  InterferometerConfig c = optimal_coherent(100.0, 1.0);
  const OptimizeResult a = optimize(c, {FreeParam::theta_alpha});
  const OptimizeResult b = optimize(c, {FreeParam::theta_alpha});
  EXPECT_EQ(a.argmin, b.argmin);
  EXPECT_LT(a.argmin[0], 0.0);
  EXPECT_NEAR(std::abs(a.argmin[0]), kPi / 2, 1e-3);
}
