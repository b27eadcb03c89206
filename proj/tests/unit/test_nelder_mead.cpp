#include <gtest/gtest.h>

#include <cmath>

#include "qcomb/nelder_mead.hpp"

using namespace qcomb;

TEST(NelderMead, Quadratic) {
  const auto f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  const NelderMeadResult r = nelder_mead(f, {0.0, 0.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-7);
  EXPECT_NEAR(r.x[1], -2.0, 1e-7);
}

TEST(NelderMead, Rosenbrock) {
  const auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions o;
  o.max_iterations = 5000;
  o.initial_step = 0.5;
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, o);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
}

TEST(NelderMead, HistoryNeverIncreases) {
  const auto f = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * std::pow(x[i] - 0.3 * i, 2) + std::sin(3.0 * x[i]);
    return s;
  };
  const NelderMeadResult r = nelder_mead(f, {0.5, 0.5, 0.5, 0.5});
  ASSERT_FALSE(r.best_history.empty());
  for (std::size_t i = 1; i < r.best_history.size(); ++i) {
    EXPECT_LE(r.best_history[i], r.best_history[i - 1]);
  }
  EXPECT_EQ(r.best_history.back(), r.value);
}

TEST(NelderMead, IterationCap) {
  const auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  NelderMeadOptions o;
  o.max_iterations = 3;
  const NelderMeadResult r = nelder_mead(f, {5.0, 5.0}, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
}
