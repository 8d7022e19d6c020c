#pragma once

/**
 * Samplers for every random object used in the verification suites:
 * Gaussian Hermitian matrices, geometric weight arrays, random words,
 * and Brownian motion tabulated on a uniform grid of [0,1].
 *
 * All draw orders are fixed and documented so that a (master_seed,
 * stream_index) pair pins the realization exactly:
 *  - matrices fill the diagonal first, then the upper triangle row by row;
 *  - arrays and words are row-major / left to right;
 *  - grids advance step by step, dimensions innermost.
 */

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "minorlab/hermitian.hpp"
#include "minorlab/rng.hpp"
#include "minorlab/rsk.hpp"

namespace minorlab {

// Dense real square matrix (row-major), used for covariances and small
// orthogonal bases.
struct RealMatrix {
  int n = 0;
  std::vector<double> a;

  RealMatrix() = default;
  explicit RealMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {
    if (dim <= 0) throw std::invalid_argument("RealMatrix: dimension must be positive");
  }

  double& at(int i, int j) { return a[index(i, j)]; }
  double at(int i, int j) const { return a[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::out_of_range("RealMatrix: index out of range");
    return static_cast<std::size_t>(i) * n + j;
  }
};

/**
 * Brownian paths tabulated at times s/n_steps, s = 0..n_steps, with
 * value(d, 0) == 0.  Stored dimension-major.
 */
struct BrownianGrid {
  int n_dims = 0;
  int n_steps = 0;
  std::vector<double> values;

  BrownianGrid() = default;
  BrownianGrid(int dims, int steps)
      : n_dims(dims),
        n_steps(steps),
        values(static_cast<std::size_t>(dims) * (steps + 1), 0.0) {
    if (dims <= 0 || steps <= 0)
      throw std::invalid_argument("BrownianGrid: dims and steps must be positive");
  }

  double value(int dim, int step) const { return values[index(dim, step)]; }
  double& value(int dim, int step) { return values[index(dim, step)]; }

  double increment(int dim, int step) const {  // B(step/n) - B((step-1)/n), step >= 1
    return value(dim, step) - value(dim, step - 1);
  }

 private:
  std::size_t index(int dim, int step) const {
    if (dim < 0 || dim >= n_dims || step < 0 || step > n_steps)
      throw std::out_of_range("BrownianGrid: index out of range");
    return static_cast<std::size_t>(dim) * (n_steps + 1) + step;
  }
};

/**
 * GUE matrix of order m: density proportional to exp(-tr(H^2)/2), i.e.
 * N(0,1) diagonal entries and complex off-diagonal entries whose real and
 * imaginary parts are independent N(0,1/2).
 */
inline HermitianMatrix sample_gue(int m, RngStream& rng) {
  if (m <= 0) throw std::invalid_argument("sample_gue: order must be positive");
  HermitianMatrix h(m);
  for (int i = 0; i < m; ++i) h(i, i) = cplx(rng.normal(), 0.0);
  const double root_half = std::sqrt(0.5);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const cplx z(root_half * rng.normal(), root_half * rng.normal());
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

// N x M array of iid geometric weights, P(w = t) = q^t (1-q).
inline IntegerArray sample_geometric_array(int n, int m, double q, RngStream& rng) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("sample_geometric_array: q must lie in (0,1)");
  IntegerArray a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a.at(i, j) = static_cast<long long>(rng.geometric(q));
  return a;
}

inline BrownianGrid sample_brownian_grid(int n_dims, int n_steps, RngStream& rng) {
  BrownianGrid g(n_dims, n_steps);
  const double scale = std::sqrt(1.0 / n_steps);
  for (int s = 1; s <= n_steps; ++s)
    for (int d = 0; d < n_dims; ++d)
      g.value(d, s) = g.value(d, s - 1) + scale * rng.normal();
  return g;
}

/**
 * iid word of length n over letters 1..k with letter probabilities p,
 * which must be sorted nonincreasing (the convention assumed by every
 * consumer of rescaled word shapes) and sum to 1.
 */
inline Word sample_word_iid(int n, const std::vector<double>& p, RngStream& rng) {
  if (n <= 0) throw std::invalid_argument("sample_word_iid: length must be positive");
  const int k = static_cast<int>(p.size());
  if (k == 0) throw std::invalid_argument("sample_word_iid: empty probability vector");
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    if (!(p[j] > 0.0)) throw std::invalid_argument("sample_word_iid: probabilities must be positive");
    if (j > 0 && p[j] > p[j - 1] + 1e-15)
      throw std::invalid_argument("sample_word_iid: probabilities must be nonincreasing");
    sum += p[j];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("sample_word_iid: probabilities must sum to 1");
  std::vector<double> cdf(k);
  double acc = 0.0;
  for (int j = 0; j < k; ++j) {
    acc += p[j];
    cdf[j] = acc;
  }
  cdf[k - 1] = 1.0;
  Word w(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    int j = 0;
    while (cdf[j] < u) ++j;
    w[i] = j + 1;
  }
  return w;
}

/**
 * Correlated Brownian grid with Cov(B(1)) = cov, realized by pushing a
 * standard grid through the symmetric square root of cov.  cov must be
 * symmetric and positive semidefinite (eigenvalues >= -1e-10; small
 * negative values are clamped to zero).
 */
inline BrownianGrid sample_correlated_brownian(const RealMatrix& cov, int n_steps,
                                               RngStream& rng) {
  const int k = cov.n;
  double scale = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) scale = std::max(scale, std::abs(cov.at(i, j)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (std::abs(cov.at(i, j) - cov.at(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("sample_correlated_brownian: covariance must be symmetric");

  HermitianMatrix h(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) h(i, j) = cplx(0.5 * (cov.at(i, j) + cov.at(j, i)), 0.0);
  const Eigensystem es = eigensystem_hermitian(h);
  std::vector<double> root(k);
  const double eig_scale = std::max(1.0, std::abs(es.values[0]));
  for (int i = 0; i < k; ++i) {
    if (es.values[i] < -1e-10)
      throw std::invalid_argument("sample_correlated_brownian: covariance is not PSD");
    // Eigenvalues at roundoff scale are numerically zero; clamping keeps
    // rank-deficient covariances exact instead of injecting sqrt(eps) noise.
    root[i] = es.values[i] <= 1e-12 * eig_scale ? 0.0 : std::sqrt(es.values[i]);
  }
  // A = V sqrt(diag) V^T; eigenvectors of a real symmetric matrix are real
  // up to the solver's phase, so take real parts.
  RealMatrix a(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int t = 0; t < k; ++t)
        acc += es.vec(i, t).real() * root[t] * es.vec(j, t).real();
      a.at(i, j) = acc;
    }

  BrownianGrid g(k, n_steps);
  std::vector<double> z(k);
  const double step_scale = std::sqrt(1.0 / n_steps);
  for (int s = 1; s <= n_steps; ++s) {
    for (int d = 0; d < k; ++d) z[d] = rng.normal();
    for (int d = 0; d < k; ++d) {
      double acc = 0.0;
      for (int t = 0; t < k; ++t) acc += a.at(d, t) * z[t];
      g.value(d, s) = g.value(d, s - 1) + step_scale * acc;
    }
  }
  return g;
}

}  // namespace minorlab
