#pragma once

/**
 * Two-sample machinery behind every equality-in-law verdict: KS with the
 * asymptotic Kolmogorov p-value, Wasserstein-1 on quantile grids, vector
 * energy distance with a label-permutation p-value, and sample covariance.
 *
 * Everything is deterministic given its inputs (plus the stream handed to
 * the permutation test) and invariant under reordering of the samples.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "minorlab/rng.hpp"
#include "minorlab/sampling.hpp"

namespace minorlab {

struct EmpiricalSample {
  std::vector<double> values;  // sorted ascending

  explicit EmpiricalSample(std::vector<double> draws) : values(std::move(draws)) {
    if (values.empty()) throw std::invalid_argument("EmpiricalSample: empty sample");
    std::sort(values.begin(), values.end());
  }

  int n() const { return static_cast<int>(values.size()); }

  // Order-statistic quantile at level u in (0,1).
  double quantile(double u) const {
    const int idx = std::min(n() - 1, static_cast<int>(u * n()));
    return values[std::max(idx, 0)];
  }
};

struct VectorSample {
  int dim = 0;
  std::vector<double> data;  // row-major

  explicit VectorSample(int d) : dim(d) {
    if (d <= 0) throw std::invalid_argument("VectorSample: dimension must be positive");
  }

  int n_rows() const { return static_cast<int>(data.size()) / dim; }
  const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * dim; }

  void append(const std::vector<double>& row_values) {
    if (static_cast<int>(row_values.size()) != dim)
      throw std::invalid_argument("VectorSample: row length mismatch");
    data.insert(data.end(), row_values.begin(), row_values.end());
  }
};

struct TwoSampleResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov tail function Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
inline double kolmogorov_q(double x) {
  if (x < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

/**
 * Two-sided two-sample KS: statistic is the sup distance of the empirical
 * CDFs, p-value from the asymptotic Kolmogorov law at effective size
 * n_a n_b / (n_a + n_b).
 */
inline TwoSampleResult ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  const int na = a.n(), nb = b.n();
  double d = 0.0, fa = 0.0, fb = 0.0;
  int i = 0, j = 0;
  while (i < na && j < nb) {
    const double va = a.values[i], vb = b.values[j];
    const double v = std::min(va, vb);
    while (i < na && a.values[i] <= v) ++i;
    while (j < nb && b.values[j] <= v) ++j;
    fa = static_cast<double>(i) / na;
    fb = static_cast<double>(j) / nb;
    d = std::max(d, std::abs(fa - fb));
  }
  const double n_eff = static_cast<double>(na) * nb / (na + nb);
  return {d, kolmogorov_q(std::sqrt(n_eff) * d)};
}

/**
 * L1 distance between quantile functions.  Equal sizes pair order
 * statistics directly; otherwise both are resampled at the mid-levels
 * (g + 0.5)/G of the finer grid G = max(n_a, n_b).
 */
inline double wasserstein1(const EmpiricalSample& a, const EmpiricalSample& b) {
  const int na = a.n(), nb = b.n();
  double total = 0.0;
  if (na == nb) {
    for (int i = 0; i < na; ++i) total += std::abs(a.values[i] - b.values[i]);
    return total / na;
  }
  const int g = std::max(na, nb);
  for (int i = 0; i < g; ++i) {
    const double u = (i + 0.5) / g;
    total += std::abs(a.quantile(u) - b.quantile(u));
  }
  return total / g;
}

// Unbiased sample covariance of the rows.
inline RealMatrix empirical_covariance(const VectorSample& v) {
  const int n = v.n_rows(), d = v.dim;
  if (n < 2) throw std::invalid_argument("empirical_covariance: need at least two rows");
  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* r = v.row(i);
    for (int c = 0; c < d; ++c) mean[c] += r[c] / n;
  }
  RealMatrix cov(d);
  for (int i = 0; i < n; ++i) {
    const double* r = v.row(i);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        cov.at(p, q) += (r[p] - mean[p]) * (r[q] - mean[q]) / (n - 1);
  }
  return cov;
}

namespace detail {
// Pooled size cap: the pairwise distance matrix is materialized as floats,
// so 6000 rows tops out at ~144 MB.
inline constexpr int kEnergyPooledCap = 6000;
}  // namespace detail

/**
 * Energy distance E = 2 E|a-b| - E|a-a'| - E|b-b'| (Euclidean norm) with a
 * label-permutation p-value p = (1 + #{E_perm >= E_obs}) / (n_perm + 1).
 * The pooled pairwise distances are computed once; each permutation only
 * re-splits the labels.  Pooled size is capped (subsample before calling).
 */
inline TwoSampleResult energy_distance(const VectorSample& a, const VectorSample& b,
                                       int n_permutations, RngStream& rng) {
  if (a.dim != b.dim) throw std::invalid_argument("energy_distance: dimension mismatch");
  if (n_permutations < 0) throw std::invalid_argument("energy_distance: negative permutations");
  const int na = a.n_rows(), nb = b.n_rows(), total = na + nb, d = a.dim;
  if (na == 0 || nb == 0) throw std::invalid_argument("energy_distance: empty sample");
  if (total > detail::kEnergyPooledCap)
    throw std::invalid_argument("energy_distance: pooled sample too large, subsample first");

  std::vector<double> pooled(static_cast<std::size_t>(total) * d);
  std::copy(a.data.begin(), a.data.end(), pooled.begin());
  std::copy(b.data.begin(), b.data.end(), pooled.begin() + a.data.size());

  std::vector<float> dist(static_cast<std::size_t>(total) * total, 0.0f);
  for (int i = 0; i < total; ++i) {
    const double* ri = pooled.data() + static_cast<std::size_t>(i) * d;
    for (int j = i + 1; j < total; ++j) {
      const double* rj = pooled.data() + static_cast<std::size_t>(j) * d;
      double acc = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = ri[c] - rj[c];
        acc += diff * diff;
      }
      const float dv = static_cast<float>(std::sqrt(acc));
      dist[static_cast<std::size_t>(i) * total + j] = dv;
      dist[static_cast<std::size_t>(j) * total + i] = dv;
    }
  }

  // Within-group sums for a given labeling; label 1 marks group a.
  std::vector<char> label(total, 0);
  for (int i = 0; i < na; ++i) label[i] = 1;
  const auto split_energy = [&](const std::vector<char>& lab) {
    double s_aa = 0.0, s_bb = 0.0, s_ab = 0.0;
    for (int i = 0; i < total; ++i) {
      const float* row = dist.data() + static_cast<std::size_t>(i) * total;
      for (int j = i + 1; j < total; ++j) {
        const double dv = row[j];
        if (lab[i] == lab[j]) {
          if (lab[i]) s_aa += dv; else s_bb += dv;
        } else {
          s_ab += dv;
        }
      }
    }
    return 2.0 * s_ab / (static_cast<double>(na) * nb) -
           2.0 * s_aa / (static_cast<double>(na) * na) -
           2.0 * s_bb / (static_cast<double>(nb) * nb);
  };

  const double observed = split_energy(label);
  if (n_permutations == 0) return {observed, 1.0};

  int at_least = 0;
  std::vector<char> shuffled = label;
  for (int p = 0; p < n_permutations; ++p) {
    for (int i = total - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(shuffled[i], shuffled[j]);
    }
    if (split_energy(shuffled) >= observed - 1e-15) ++at_least;
  }
  return {observed, static_cast<double>(1 + at_least) / (n_permutations + 1)};
}

}  // namespace minorlab
