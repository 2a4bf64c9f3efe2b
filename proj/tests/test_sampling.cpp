#include "riclab/error.hpp"
#include "riclab/optimize.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace riclab;

TEST(Histogram, CountsAndEdges) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(2000);
  for (double& x : v) x = n(rng);
  const auto h = freedman_diaconis_histogram(v);
  int total = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    total += h[k].count;
    EXPECT_LT(h[k].left, h[k].right);
    if (k > 0) EXPECT_DOUBLE_EQ(h[k].left, h[k - 1].right);
  }
  EXPECT_EQ(total, 2000);
  EXPECT_DOUBLE_EQ(h.front().left, *std::min_element(v.begin(), v.end()));
  EXPECT_GE(h.back().right, *std::max_element(v.begin(), v.end()));
  // FD width 2 IQR n^{-1/3}: IQR of a standard normal is about 1.349.
  const double width = h[0].right - h[0].left;
  EXPECT_NEAR(width, 2.0 * 1.349 / std::cbrt(2000.0), 0.03);
}

TEST(Histogram, ConstantAndEmpty) {
  EXPECT_TRUE(freedman_diaconis_histogram({}).empty());
  const auto h = freedman_diaconis_histogram({3.0, 3.0, 3.0});
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].count, 3);
}

TEST(Histogram, HeavyTailUsesOverflowBin) {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(1.0 + i * 1e-3);
  v.push_back(1e9);
  const auto h = freedman_diaconis_histogram(v, 100);
  ASSERT_EQ(h.size(), 100u);
  EXPECT_EQ(h.back().count, 1);
  EXPECT_DOUBLE_EQ(h.back().right, 1e9);
  int total = 0;
  for (const auto& b : h) total += b.count;
  EXPECT_EQ(total, 1001);
}

TEST(SampleBatch, ModeAndMin) {
  SampleBatch b;
  b.values = {3.0, 1.0, 2.0};
  b.histogram = {{0.0, 1.0, 1}, {1.0, 2.0, 5}, {2.0, 3.0, 2}};
  EXPECT_DOUBLE_EQ(b.min(), 1.0);
  EXPECT_DOUBLE_EQ(b.mode(), 1.5);
  EXPECT_THROW(SampleBatch{}.min(), Error);
}

TEST(LevyPdf, FormulaAndNormalization) {
  const double a = 3.0, b = 1.0;
  const double x = 2.5;
  const double z = x - b;
  EXPECT_NEAR(levy_pdf(x, a, b), 1.0 / a / std::sqrt(2.0 * M_PI * std::pow(z / a, 3.0)) * std::exp(-a / (2.0 * z)),
              1e-15);
  EXPECT_EQ(levy_pdf(0.5, a, b), 0.0);
  EXPECT_THROW(levy_pdf(2.0, -1.0, 0.0), Error);
  // Integrate with x = b + a / u^2, dx = -2a/u^3 du, over u in (0, 40).
  double total = 0.0;
  const int steps = 400000;
  for (int i = 0; i < steps; ++i) {
    const double u = (i + 0.5) * 40.0 / steps;
    total += levy_pdf(b + a / (u * u), a, b) * 2.0 * a / (u * u * u) * (40.0 / steps);
  }
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(LevyFit, RecoversScaleAcrossSeeds) {
  double mean_b = 0.0;
  const int seeds = 40;
  for (int s = 1; s <= seeds; ++s) {
    const LevyFit fit = fit_levy(sample_levy(341.31, 5.12, 10000, s));
    EXPECT_NEAR(fit.a / 341.31, 1.0, 0.1) << s;
    const std::vector<double> x = sample_levy(341.31, 5.12, 10000, s);
    EXPECT_LT(fit.b, *std::min_element(x.begin(), x.end()));
    mean_b += fit.b / seeds;
  }
  // Shift estimates are individually noisy but centred on the truth.
  EXPECT_NEAR(mean_b, 5.12, 0.7);
}

TEST(LevyFit, LocationEquivariance) {
  std::vector<double> x = sample_levy(2.0, 0.0, 3000, 9);
  const LevyFit base = fit_levy(x);
  for (double& v : x) v += 10.0;
  const LevyFit shifted = fit_levy(x);
  EXPECT_NEAR(shifted.b, base.b + 10.0, 1e-6);
  EXPECT_NEAR(shifted.a, base.a, 1e-6 * base.a);
}

TEST(LevyFit, IsAMaximum) {
  const std::vector<double> x = sample_levy(5.0, 2.0, 2000, 4);
  const LevyFit fit = fit_levy(x);
  auto loglik = [&](double a, double b) {
    double s = 0.0;
    for (double v : x) s += std::log(levy_pdf(v, a, b));
    return s;
  };
  EXPECT_NEAR(loglik(fit.a, fit.b), fit.log_likelihood, 1e-6 * std::abs(fit.log_likelihood));
  for (double da : {-0.05, 0.05}) EXPECT_LE(loglik(fit.a * (1 + da), fit.b), fit.log_likelihood + 1e-9);
  for (double db : {-0.01, 0.01}) EXPECT_LE(loglik(fit.a, fit.b + db), fit.log_likelihood + 1e-9);
}

TEST(LevyFit, Degenerate) {
  try {
    fit_levy({2.0, 2.0, 2.0, 2.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FitError);
  }
  EXPECT_THROW(fit_levy({1.0, 2.0}), Error);
}

TEST(SampleQuantumness, FloorAndDeterminism) {
  const SampleBatch a = sample_quantumness(300, 5, SampleMethod::AlternatingProjection, 1);
  const SampleBatch b = sample_quantumness(300, 5, SampleMethod::AlternatingProjection, 3);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(static_cast<int>(a.values.size()) + a.excluded, 300);
  for (double v : a.values) EXPECT_GT(v, 6.0);
  int total = 0;
  for (const auto& h : a.histogram) total += h.count;
  EXPECT_EQ(total, static_cast<int>(a.values.size()));
  EXPECT_FALSE(a.measure.empty());
}

TEST(SampleQuantumness, RandomPovmMethod) {
  const SampleBatch a = sample_quantumness(200, 2, SampleMethod::RandomPovm);
  for (double v : a.values) EXPECT_GT(v, 6.0);
  EXPECT_NE(a.measure, sampling_measure(SampleMethod::AlternatingProjection));
  EXPECT_EQ(parse_sample_method("random"), SampleMethod::RandomPovm);
  EXPECT_THROW(parse_sample_method("x"), Error);
  EXPECT_THROW(sample_quantumness(0, 1, SampleMethod::RandomPovm), Error);
}
