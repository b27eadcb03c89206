#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qcomb/biphoton.hpp"
#include "qcomb/errors.hpp"
#include "qcomb/hom.hpp"
#include "qcomb/units.hpp"

using namespace qcomb;

namespace {

Jsa gaussian_state(double sigma, std::size_t points = 4097) {
  const SpectralGrid grid = SpectralGrid::one_d(20.0 * sigma, points);
  std::vector<Complex> c(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double w = grid.minus.coordinate(k);
    c[k] = std::exp(-w * w / (2.0 * sigma * sigma));
  }
  return Jsa(grid, std::move(c), {}, 1e15);
}

// Flat 1/2 with a single-sample feature at zero delay.
HomTrace spike(double value, std::size_t n = 201) {
  HomTrace t;
  t.delays = uniform_delays(-1.0, 1.0, n);
  t.p_coincidence.assign(n, 0.5);
  t.p_coincidence[n / 2] = value;
  return t;
}

HomTrace from_function(double (*f)(double), double lo, double hi, std::size_t n) {
  HomTrace t;
  t.delays = uniform_delays(lo, hi, n);
  for (double tau : t.delays) t.p_coincidence.push_back(f(tau));
  return t;
}

}  // namespace

TEST(Trace, SymmetricStateHasNoCoincidencesAtZeroDelay) {
  const Jsa jsa = gaussian_state(1.0);
  const std::vector<double> zero{0.0};
  EXPECT_NEAR(coincidence_trace(jsa, zero).p_coincidence[0], 0.0, 1e-14);
}

TEST(Trace, AntisymmetricStateAlwaysCoincides) {
  const SpectralGrid grid = SpectralGrid::one_d(2.0, 3);
  const Jsa jsa(grid, {-1.0, 0.0, 1.0}, {}, 1e15);
  const std::vector<double> zero{0.0};
  EXPECT_NEAR(coincidence_trace(jsa, zero).p_coincidence[0], 1.0, 1e-14);
}

TEST(Trace, GaussianClosedForm) {
  const double sigma = 3.0;
  const Jsa jsa = gaussian_state(sigma);
  const std::vector<double> delays = uniform_delays(-4.0, 4.0, 161);
  const HomTrace t = coincidence_trace(jsa, delays);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const double tau = delays[i];
    EXPECT_NEAR(t.p_coincidence[i], 0.5 * (1.0 - std::exp(-sigma * sigma * tau * tau / 4.0)), 1e-12);
    EXPECT_NEAR(gaussian_coincidence(sigma, tau), 0.5 * (1.0 - std::exp(-sigma * sigma * tau * tau / 4.0)),
                1e-15);
  }
}

TEST(Trace, GaussianDipWidth) {
  const double sigma = 3.0;
  const std::vector<double> delays = uniform_delays(-8.0, 8.0, 1601);
  const HomTrace t = coincidence_trace(gaussian_state(sigma), delays);
  EXPECT_NEAR(feature_width(t), 4.0 * std::sqrt(std::log(2.0)) / sigma, 1e-4);
  EXPECT_NEAR(analyze_feature(t).visibility, 1.0, 1e-9);
}

TEST(Trace, ZeroDelayIsOneMinusOverlap) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  const std::vector<double> zero{0.0};
  for (int k = 0; k < 100; ++k) {
    const SpectralGrid grid = SpectralGrid::one_d(10.0, 11);
    std::vector<Complex> c(11);
    for (auto& v : c) v = Complex(n(rng), n(rng));
    const Jsa jsa(grid, c, {}, 1e15);
    EXPECT_NEAR(coincidence_trace(jsa, zero).p_coincidence[0], 0.5 * (1.0 - exchange_overlap(jsa).real()),
                1e-12);
  }
}

TEST(Trace, EvaluatorMatchesDirectSum) {
  const Jsa jsa = apply_delay(gaussian_state(2.0, 1025), 0.3);
  const std::vector<double> delays = uniform_delays(-3.0, 3.0, 61);
  const CoincidenceEvaluator eval(jsa.grid().minus, delays);
  const std::vector<double> fast = eval.evaluate(jsa);
  const HomTrace slow = coincidence_trace(jsa, delays);
  for (std::size_t i = 0; i < delays.size(); ++i) {
    EXPECT_NEAR(fast[i], slow.p_coincidence[i], 1e-12);
  }
}

TEST(Trace, DelayedStateShiftsTheDip) {
  const std::vector<double> delays = uniform_delays(-4.0, 4.0, 801);
  const HomTrace t = trace_for_delayed_state(gaussian_state(3.0), 1.5, delays);
  EXPECT_NEAR(t.extremum_delay, 1.5, 1e-9);
  EXPECT_EQ(t.kind, ExtremumKind::Dip);
}

TEST(Visibility, HandTraces) {
  const BaselineWindow w{0.5, 1.0};
  EXPECT_NEAR(analyze_feature(spike(0.0), w).visibility, 1.0, 1e-15);
  const FeatureSummary peak = analyze_feature(spike(1.0), w);
  EXPECT_EQ(peak.kind, ExtremumKind::Peak);
  EXPECT_NEAR(peak.visibility, -1.0, 1e-15);
  EXPECT_NEAR(analyze_feature(spike(0.25), w).visibility, 0.5, 1e-15);
  EXPECT_FALSE(analyze_feature(spike(0.0), w).window_overlaps_feature);
}

TEST(Visibility, ExplicitWindow) {
  HomTrace t = spike(0.1);
  for (std::size_t i = 0; i < t.delays.size(); ++i) {
    if (std::abs(t.delays[i]) > 0.5) t.p_coincidence[i] = 0.4;
  }
  EXPECT_NEAR(visibility(t, {0.6, 1.0}), 0.75, 1e-12);
  EXPECT_NEAR(visibility(t, {0.1, 0.4}), 0.8, 1e-12);
}

TEST(Visibility, ZeroBaselineIsUndefined) {
  HomTrace t;
  t.delays = uniform_delays(-1.0, 1.0, 101);
  t.p_coincidence.assign(101, 0.0);
  t.p_coincidence[50] = 1.2;  // the largest excursion from 1/2 marks the center
  try {
    analyze_feature(t, {0.5, 1.0});
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("baseline"), std::string::npos);
  }
}

TEST(Visibility, TooFewBaselineSamples) {
  EXPECT_THROW(analyze_feature(spike(0.0, 21), {0.95, 1.0}), ValidationError);
  EXPECT_THROW(analyze_feature(spike(0.0), {0.5, 0.5}), ValidationError);
}

TEST(Width, CoarseSamplingIsAnError) {
  const double sigma = 3.0;
  const std::vector<double> delays = uniform_delays(-8.0, 8.0, 41);
  const HomTrace t = coincidence_trace(gaussian_state(sigma), delays);
  try {
    feature_width(t);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("not resolved"), std::string::npos);
  }
}

TEST(Width, TriangleByInterpolation) {
  const HomTrace t = from_function([](double x) { return std::abs(x) < 1.0 ? 0.5 * std::abs(x) : 0.5; },
                                   -5.0, 5.0, 1001);
  EXPECT_NEAR(feature_width(t), 1.0, 1e-9);
}

TEST(Delays, Uniform) {
  const std::vector<double> d = uniform_delays(-1.0, 1.0, 5);
  ASSERT_EQ(d.size(), 5u);
  EXPECT_DOUBLE_EQ(d.front(), -1.0);
  EXPECT_DOUBLE_EQ(d.back(), 1.0);
  EXPECT_DOUBLE_EQ(d[2], 0.0);
}
