#include "minorlab/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "minorlab/rng.hpp"

namespace minorlab {
namespace {

std::vector<double> normal_draws(int n, double mean, RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = mean + rng.normal();
  return v;
}

VectorSample normal_rows(int n, int dim, double shift0, RngStream& rng) {
  VectorSample v(dim);
  std::vector<double> row(dim);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < dim; ++c) row[c] = rng.normal() + (c == 0 ? shift0 : 0.0);
    v.append(row);
  }
  return v;
}

TEST(KolmogorovQ, PinnedValuesAndMonotonicity) {
  EXPECT_DOUBLE_EQ(kolmogorov_q(0.0), 1.0);
  EXPECT_DOUBLE_EQ(kolmogorov_q(1e-9), 1.0);
  EXPECT_NEAR(kolmogorov_q(1.358), 0.05, 1e-3);
  EXPECT_LT(kolmogorov_q(3.0), 1e-7);
  double prev = 1.0;
  for (double x = 0.05; x <= 3.0; x += 0.05) {
    const double q = kolmogorov_q(x);
    EXPECT_LE(q, prev + 1e-15);
    prev = q;
  }
}

TEST(KsTwoSample, IdenticalSamplesGiveZero) {
  RngStream rng(0x57a70001, 0);
  const std::vector<double> draws = normal_draws(500, 0.0, rng);
  const EmpiricalSample a(draws), b(draws);
  const TwoSampleResult r = ks_two_sample(a, b);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(KsTwoSample, HandComputedTiedExample) {
  const EmpiricalSample a(std::vector<double>{1, 1, 2, 3});
  const EmpiricalSample b(std::vector<double>{1, 2, 2, 3});
  const TwoSampleResult r = ks_two_sample(a, b);
  EXPECT_NEAR(r.statistic, 0.25, 1e-15);
  EXPECT_GT(r.p_value, 0.99);
}

TEST(KsTwoSample, SeparatesShiftedNormals) {
  RngStream rng(0x57a70002, 0);
  const EmpiricalSample a(normal_draws(10000, 0.0, rng));
  const EmpiricalSample b(normal_draws(10000, 0.5, rng));
  EXPECT_LT(ks_two_sample(a, b).p_value, 1e-6);
}

// Under the null the p-value is approximately uniform, so counting runs
// below a small level bounds the realized false-positive rate.
TEST(KsTwoSample, NullCalibration) {
  RngStream rng(0x57a70003, 0);
  int below = 0;
  for (int run = 0; run < 200; ++run) {
    const EmpiricalSample a(normal_draws(2000, 0.0, rng));
    const EmpiricalSample b(normal_draws(2000, 0.0, rng));
    if (ks_two_sample(a, b).p_value < 0.01) ++below;
  }
  EXPECT_LE(below, 7);
}

TEST(Wasserstein1, ShiftAndNullBehaviour) {
  RngStream rng(0x57a70004, 0);
  const std::vector<double> base = normal_draws(10000, 0.0, rng);
  std::vector<double> shifted = base;
  for (double& x : shifted) x += 0.7;
  const EmpiricalSample a(base), b(shifted);
  EXPECT_NEAR(wasserstein1(a, a), 0.0, 1e-15);
  EXPECT_NEAR(wasserstein1(a, b), 0.7, 1e-12);

  const EmpiricalSample c(normal_draws(10000, 0.0, rng));
  EXPECT_LE(wasserstein1(a, c), 0.04);
}

TEST(Wasserstein1, UnequalSizesUseQuantileGrid) {
  RngStream rng(0x57a70005, 0);
  const EmpiricalSample a(normal_draws(10000, 0.0, rng));
  const EmpiricalSample b(normal_draws(7000, 0.0, rng));
  EXPECT_LE(wasserstein1(a, b), 0.05);
  const EmpiricalSample c(normal_draws(7000, 0.6, rng));
  EXPECT_NEAR(wasserstein1(a, c), 0.6, 0.05);
}

TEST(EnergyDistance, IdenticalSamplesScoreZero) {
  RngStream rng(0x57a70006, 0);
  const VectorSample a = normal_rows(400, 3, 0.0, rng);
  RngStream perm(0x57a70006, 1);
  const TwoSampleResult r = energy_distance(a, a, 199, perm);
  EXPECT_NEAR(r.statistic, 0.0, 1e-10);
  EXPECT_GE(r.p_value, 0.9);
}

TEST(EnergyDistance, SeparatesMeanShift) {
  RngStream rng(0x57a70007, 0);
  const VectorSample a = normal_rows(500, 2, 0.0, rng);
  const VectorSample b = normal_rows(500, 2, 0.5, rng);
  RngStream perm(0x57a70007, 1);
  const TwoSampleResult r = energy_distance(a, b, 499, perm);
  EXPECT_GT(r.statistic, 0.0);
  EXPECT_LT(r.p_value, 0.01);
}

TEST(EnergyDistance, NullPermutationCalibration) {
  RngStream rng(0x57a70008, 0);
  RngStream perm(0x57a70008, 1);
  int below = 0;
  for (int run = 0; run < 20; ++run) {
    const VectorSample a = normal_rows(150, 2, 0.0, rng);
    const VectorSample b = normal_rows(150, 2, 0.0, rng);
    if (energy_distance(a, b, 199, perm).p_value < 0.05) ++below;
  }
  EXPECT_LE(below, 5);
}

TEST(EnergyDistance, RejectsBadInput) {
  RngStream rng(0x57a70009, 0);
  RngStream perm(0x57a70009, 1);
  const VectorSample a = normal_rows(10, 2, 0.0, rng);
  const VectorSample b = normal_rows(10, 3, 0.0, rng);
  EXPECT_THROW(energy_distance(a, b, 99, perm), std::invalid_argument);
  EXPECT_THROW(energy_distance(a, a, -1, perm), std::invalid_argument);

  VectorSample big(1);
  std::vector<double> row{0.0};
  for (int i = 0; i < 3001; ++i) big.append(row);
  EXPECT_THROW(energy_distance(big, big, 0, perm), std::invalid_argument);

  const VectorSample empty(2);
  EXPECT_THROW(energy_distance(a, empty, 0, perm), std::invalid_argument);
}

TEST(EnergyDistance, ZeroPermutationsReportUnitPValue) {
  RngStream rng(0x57a7000a, 0);
  RngStream perm(0x57a7000a, 1);
  const VectorSample a = normal_rows(50, 2, 0.0, rng);
  const VectorSample b = normal_rows(50, 2, 1.0, rng);
  const TwoSampleResult r = energy_distance(a, b, 0, perm);
  EXPECT_GT(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(EmpiricalCovariance, RecoversIdentityAndDegenerateCases) {
  RngStream rng(0x57a7000b, 0);
  const VectorSample v = normal_rows(100000, 2, 0.0, rng);
  const RealMatrix cov = empirical_covariance(v);
  EXPECT_NEAR(cov.at(0, 0), 1.0, 0.02);
  EXPECT_NEAR(cov.at(1, 1), 1.0, 0.02);
  EXPECT_NEAR(cov.at(0, 1), 0.0, 0.02);
  EXPECT_DOUBLE_EQ(cov.at(0, 1), cov.at(1, 0));

  VectorSample constant(2);
  for (int i = 0; i < 5; ++i) constant.append({1.5, -2.0});
  const RealMatrix zero = empirical_covariance(constant);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) EXPECT_NEAR(zero.at(p, q), 0.0, 1e-15);

  VectorSample single(2);
  single.append({0.0, 0.0});
  EXPECT_THROW(empirical_covariance(single), std::invalid_argument);
}

TEST(EmpiricalSample, SortsAndValidates) {
  EXPECT_THROW(EmpiricalSample(std::vector<double>{}), std::invalid_argument);
  const EmpiricalSample s(std::vector<double>{3.0, -1.0, 2.0});
  EXPECT_EQ(s.n(), 3);
  EXPECT_DOUBLE_EQ(s.values.front(), -1.0);
  EXPECT_DOUBLE_EQ(s.values.back(), 3.0);
  EXPECT_DOUBLE_EQ(s.quantile(0.999), 3.0);
  EXPECT_DOUBLE_EQ(s.quantile(0.0), -1.0);
}

}  // namespace
}  // namespace minorlab
