#include "minorlab/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "minorlab/rng.hpp"

namespace ml = minorlab;

namespace {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Empirical covariance (denominator n-1) of rows of data, each of width k.
std::vector<double> covariance(const std::vector<std::vector<double>>& data, int k) {
  const int n = static_cast<int>(data.size());
  std::vector<double> mean(k, 0.0);
  for (const auto& row : data)
    for (int j = 0; j < k; ++j) mean[j] += row[j] / n;
  std::vector<double> cov(static_cast<std::size_t>(k) * k, 0.0);
  for (const auto& row : data)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        cov[static_cast<std::size_t>(i) * k + j] +=
            (row[i] - mean[i]) * (row[j] - mean[j]) / (n - 1);
  return cov;
}

}  // namespace

TEST(NormalIcdf, MatchesReferenceValues) {
  EXPECT_DOUBLE_EQ(ml::normal_icdf(0.5), 0.0);
  EXPECT_NEAR(ml::normal_icdf(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(ml::normal_icdf(0.025), -1.959963984540054, 1e-12);
  // Round trip against the erfc-based cdf.  The lower tail is exact to
  // 1e-9 because small p is fully representable; for x > 0 the double
  // spacing near p = 1 caps the achievable accuracy at ~eps/pdf(x).
  for (double x = -8.0; x <= 7.0 + 1e-9; x += 0.25) {
    const double p = standard_normal_cdf(x);
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
    const double tol = 1e-9 * std::max(1.0, std::abs(x)) + (x > 0.0 ? 4e-16 / pdf : 0.0);
    EXPECT_NEAR(ml::normal_icdf(p), x, tol) << "x=" << x;
  }
  for (double p = 0.01; p < 0.5; p += 0.02)
    EXPECT_NEAR(ml::normal_icdf(p) + ml::normal_icdf(1.0 - p), 0.0, 1e-11);
  EXPECT_THROW(ml::normal_icdf(0.0), std::domain_error);
  EXPECT_THROW(ml::normal_icdf(1.0), std::domain_error);
}

TEST(RngStream, DeterministicAndStreamSeparated) {
  ml::RngStream a(12345, 7);
  ml::RngStream b(12345, 7);
  ml::RngStream c(12345, 8);
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next_u64();
    ASSERT_EQ(va, b.next_u64());
    if (va != c.next_u64()) any_differs = true;
  }
  EXPECT_TRUE(any_differs);
}

TEST(RngStream, StreamsAreEmpiricallyUncorrelated) {
  ml::RngStream a(9001, 0);
  ml::RngStream b(9001, 1);
  const int n = 100000;
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform01();
    const double y = b.uniform01();
    sx += x; sy += y; sxy += x * y; sxx += x * x; syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  EXPECT_LT(std::abs(cov / std::sqrt(vx * vy)), 0.02);
}

TEST(RngStream, NormalMoments) {
  ml::RngStream rng(0x5a3f0001, 0);
  const int n = 100000;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x; s2 += x * x; s3 += x * x * x; s4 += x * x * x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.03);
  EXPECT_NEAR(s3 / n, 0.0, 0.08);
  EXPECT_NEAR(s4 / n, 3.0, 0.12);
}

TEST(RngStream, GeometricLaw) {
  ml::RngStream rng(0x5a3f0002, 0);
  const double q = 0.4;
  const int n = 200000;
  double mean = 0.0;
  int zeros = 0, ones = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t w = rng.geometric(q);
    mean += static_cast<double>(w) / n;
    if (w == 0) ++zeros;
    if (w == 1) ++ones;
  }
  EXPECT_NEAR(mean, q / (1.0 - q), 0.01);                       // q/(1-q) = 2/3
  EXPECT_NEAR(static_cast<double>(zeros) / n, 1.0 - q, 0.005);  // P(0) = 1-q
  EXPECT_NEAR(static_cast<double>(ones) / n, q * (1.0 - q), 0.005);
}

TEST(SampleGue, HermitianWithCorrectSecondMoments) {
  ml::RngStream rng(0x5a3f0003, 0);
  const int m = 3;
  const int trials = 20000;
  double diag_sq = 0.0, off_sq = 0.0, trace_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ml::HermitianMatrix h = ml::sample_gue(m, rng);
    ASSERT_LE(h.hermitian_defect(), 0.0);
    diag_sq += std::norm(h(0, 0)) / trials;
    off_sq += std::norm(h(0, 1)) / trials;
    double tr2 = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) tr2 += std::norm(h(i, j));
    trace_sq += tr2 / trials;
  }
  EXPECT_NEAR(diag_sq, 1.0, 0.05);   // E[h_ii^2] = 1
  EXPECT_NEAR(off_sq, 1.0, 0.03);    // E[|h_ij|^2] = 1
  EXPECT_NEAR(trace_sq, m * m, 0.2); // E[tr H^2] = m^2
}

TEST(SampleGeometricArray, ShapeAndRange) {
  ml::RngStream rng(0x5a3f0004, 0);
  const ml::IntegerArray a = ml::sample_geometric_array(5, 7, 0.3, rng);
  EXPECT_EQ(a.n_rows, 5);
  EXPECT_EQ(a.n_cols, 7);
  for (int i = 0; i < a.n_rows; ++i)
    for (int j = 0; j < a.n_cols; ++j) EXPECT_GE(a.at(i, j), 0);
  EXPECT_THROW(ml::sample_geometric_array(2, 2, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(ml::sample_geometric_array(2, 2, 1.0, rng), std::invalid_argument);
}

TEST(SampleBrownianGrid, StartsAtZeroWithUnitVarianceAtOne) {
  ml::RngStream rng(0x5a3f0005, 0);
  const int trials = 20000;
  double var_end = 0.0, cross = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ml::BrownianGrid g = ml::sample_brownian_grid(2, 8, rng);
    ASSERT_EQ(g.value(0, 0), 0.0);
    ASSERT_EQ(g.value(1, 0), 0.0);
    var_end += g.value(0, 8) * g.value(0, 8) / trials;
    cross += g.value(0, 8) * g.value(1, 8) / trials;
  }
  EXPECT_NEAR(var_end, 1.0, 0.05);  // Var B(1) = 1
  EXPECT_NEAR(cross, 0.0, 0.04);    // independent dimensions
}

TEST(SampleBrownianGrid, IncrementVarianceMatchesMesh) {
  ml::RngStream rng(0x5a3f0006, 0);
  const int n_steps = 16;
  const int trials = 20000;
  double var_inc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ml::BrownianGrid g = ml::sample_brownian_grid(1, n_steps, rng);
    var_inc += g.increment(0, 5) * g.increment(0, 5) / trials;
  }
  EXPECT_NEAR(var_inc, 1.0 / n_steps, 0.01);
}

TEST(SampleWordIid, FrequenciesMatchProbabilities) {
  ml::RngStream rng(0x5a3f0007, 0);
  const std::vector<double> p = {0.5, 0.3, 0.2};
  const int n = 1000000;
  const ml::Word w = ml::sample_word_iid(n, p, rng);
  std::vector<int> counts(3, 0);
  for (int letter : w) {
    ASSERT_GE(letter, 1);
    ASSERT_LE(letter, 3);
    ++counts[letter - 1];
  }
  for (int j = 0; j < 3; ++j)
    EXPECT_NEAR(static_cast<double>(counts[j]) / n, p[j], 0.002);
}

TEST(SampleWordIid, RejectsInvalidProbabilities) {
  ml::RngStream rng(0x5a3f0008, 0);
  EXPECT_THROW(ml::sample_word_iid(10, {0.3, 0.5, 0.2}, rng), std::invalid_argument);
  EXPECT_THROW(ml::sample_word_iid(10, {0.6, 0.3}, rng), std::invalid_argument);
  EXPECT_THROW(ml::sample_word_iid(10, {1.0, 0.0}, rng), std::invalid_argument);
  EXPECT_THROW(ml::sample_word_iid(0, {1.0}, rng), std::invalid_argument);
}

TEST(SampleCorrelatedBrownian, RealizesRequestedCovariance) {
  // Unit diagonal with off-diagonal -1/(k-1), k = 3.
  ml::RealMatrix cov(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cov.at(i, j) = (i == j) ? 1.0 : -0.5;
  ml::RngStream rng(0x5a3f0009, 0);
  const int trials = 100000;
  std::vector<std::vector<double>> ends(trials, std::vector<double>(3));
  for (int t = 0; t < trials; ++t) {
    const ml::BrownianGrid g = ml::sample_correlated_brownian(cov, 1, rng);
    for (int j = 0; j < 3; ++j) ends[t][j] = g.value(j, 1);
  }
  const std::vector<double> emp = covariance(ends, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(emp[static_cast<std::size_t>(i) * 3 + j], cov.at(i, j), 0.02);
}

TEST(SampleCorrelatedBrownian, RankDeficientCovarianceIsExactPathwise) {
  // cov = [[1,-1],[-1,1]] has rank 1, so B_1 + B_2 vanishes identically.
  ml::RealMatrix cov(2);
  cov.at(0, 0) = cov.at(1, 1) = 1.0;
  cov.at(0, 1) = cov.at(1, 0) = -1.0;
  ml::RngStream rng(0x5a3f000a, 0);
  const ml::BrownianGrid g = ml::sample_correlated_brownian(cov, 64, rng);
  for (int s = 0; s <= 64; ++s)
    EXPECT_NEAR(g.value(0, s) + g.value(1, s), 0.0, 1e-12);
}

TEST(SampleCorrelatedBrownian, RejectsInvalidCovariance) {
  ml::RngStream rng(0x5a3f000b, 0);
  ml::RealMatrix indefinite(2);
  indefinite.at(0, 0) = indefinite.at(1, 1) = 1.0;
  indefinite.at(0, 1) = indefinite.at(1, 0) = 2.0;  // eigenvalues 3 and -1
  EXPECT_THROW(ml::sample_correlated_brownian(indefinite, 4, rng), std::invalid_argument);

  ml::RealMatrix asym(2);
  asym.at(0, 0) = asym.at(1, 1) = 1.0;
  asym.at(0, 1) = 0.5;
  asym.at(1, 0) = -0.5;
  EXPECT_THROW(ml::sample_correlated_brownian(asym, 4, rng), std::invalid_argument);
}
