#pragma once

/**
 * Symmetric random walks on the cycle Z/kZ and the Gaussian objects
 * attached to them: the transition spectrum, the limiting Brownian
 * covariance of centered letter counts, and a sampler for chain words.
 *
 * A spec holds step probabilities p[r], r = 0..k-1, where p[r] is the
 * probability of moving by +r (mod k).  Required: p symmetric
 * (p[r] = p[k-r]), stochastic, irreducible, aperiodic.  Symmetry makes
 * the transition matrix a real symmetric circulant, so its eigenvalues
 * are lambda_l = sum_r p[r] cos(2 pi (l-1) r / k) and its eigenvectors
 * are the real Fourier basis.
 *
 * Each nontrivial mode relaxes at rate lambda, contributing variance
 * factor eta = (1 + lambda)/(1 - lambda) to the diffusive limit of its
 * letter-count combination.  The limit covariance is Sigma =
 * S diag(0, eta_2, eta_2, eta_3, eta_3, ...) S^T with S the Fourier
 * basis below; correlated_from_standard realizes a Brownian motion with
 * exactly this covariance from k-1 independent coordinates.
 */

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "minorlab/sampling.hpp"

namespace minorlab {

struct CyclicMarkovSpec {
  int k = 0;
  std::vector<double> p;  // p[r] = probability of step +r (mod k)
};

namespace detail {
inline constexpr double kMarkovSumTolerance = 1e-12;
inline constexpr double kSpectralGapFloor = 1e-12;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace detail

inline void validate_cyclic_spec(const CyclicMarkovSpec& spec) {
  const int k = spec.k;
  if (k < 2) throw std::invalid_argument("cyclic spec: k must be at least 2");
  if (static_cast<int>(spec.p.size()) != k)
    throw std::invalid_argument("cyclic spec: need exactly k step probabilities");
  double sum = 0.0;
  for (double v : spec.p) {
    if (v < 0.0) throw std::invalid_argument("cyclic spec: negative step probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > detail::kMarkovSumTolerance)
    throw std::invalid_argument("cyclic spec: step probabilities must sum to 1");
  for (int r = 0; r < k; ++r)
    if (std::abs(spec.p[r] - spec.p[(k - r) % k]) > detail::kMarkovSumTolerance)
      throw std::invalid_argument("cyclic spec: step law must be symmetric, p[r] == p[k-r]");

  // Irreducible iff the support of the step law generates Z/kZ.
  int g = k;
  bool has_even_step = false;
  bool has_zero_step = false;
  for (int r = 0; r < k; ++r) {
    if (spec.p[r] > 0.0) {
      g = std::gcd(g, r);
      if (r == 0) has_zero_step = true;
      else if (r % 2 == 0) has_even_step = true;
    }
  }
  if (g != 1) throw std::invalid_argument("cyclic spec: chain is reducible");
  // The walk is bipartite (period 2) exactly when k is even and every
  // step in the support is odd.
  if (!has_zero_step && k % 2 == 0 && !has_even_step)
    throw std::invalid_argument("cyclic spec: chain is periodic");
}

// lambda_l for l = 1..k (returned 0-indexed); lambda_1 = 1.
inline std::vector<double> markov_eigenvalues(const CyclicMarkovSpec& spec) {
  validate_cyclic_spec(spec);
  const int k = spec.k;
  std::vector<double> lambda(k, 0.0);
  for (int l = 0; l < k; ++l) {
    double acc = 0.0;
    for (int r = 0; r < k; ++r) acc += spec.p[r] * std::cos(detail::kTwoPi * l * r / k);
    lambda[l] = acc;
  }
  return lambda;
}

inline double mixing_eta(double lambda) { return (1.0 + lambda) / (1.0 - lambda); }

/**
 * Real Fourier eigenbasis of the transition circulant.  Columns, in
 * order: the constant vector, then (cos, sin) pairs for modes
 * 1..floor((k-1)/2), then the alternating vector when k is even.
 * lambda[c] / eta[c] give the transition eigenvalue and variance factor
 * of column c (eta[0] = 0 by convention for the constant mode).
 */
struct MarkovEigenbasis {
  RealMatrix s;
  std::vector<double> lambda;
  std::vector<double> eta;
};

inline MarkovEigenbasis build_eigenbasis(const CyclicMarkovSpec& spec) {
  const std::vector<double> lam = markov_eigenvalues(spec);
  const int k = spec.k;
  MarkovEigenbasis basis;
  basis.s = RealMatrix(k);
  basis.lambda.assign(k, 0.0);
  basis.eta.assign(k, 0.0);
  const double inv_root_k = 1.0 / std::sqrt(static_cast<double>(k));
  const double root2 = std::sqrt(2.0);

  for (int j = 0; j < k; ++j) basis.s.at(j, 0) = inv_root_k;
  basis.lambda[0] = lam[0];
  basis.eta[0] = 0.0;

  auto set_mode = [&](int col, double lambda_value) {
    if (lambda_value >= 1.0 - detail::kSpectralGapFloor ||
        lambda_value <= -1.0 + detail::kSpectralGapFloor)
      throw std::invalid_argument("cyclic spec: singular mode, |lambda| too close to 1");
    basis.lambda[col] = lambda_value;
    basis.eta[col] = mixing_eta(lambda_value);
  };

  for (int r = 1; r <= (k - 1) / 2; ++r) {
    const int ccos = 2 * r - 1, csin = 2 * r;
    for (int j = 0; j < k; ++j) {
      const double angle = detail::kTwoPi * r * (j + 1) / k;
      basis.s.at(j, ccos) = root2 * std::cos(angle) * inv_root_k;
      basis.s.at(j, csin) = root2 * std::sin(angle) * inv_root_k;
    }
    set_mode(ccos, lam[r]);
    set_mode(csin, lam[r]);
  }
  if (k % 2 == 0) {
    for (int j = 0; j < k; ++j)
      basis.s.at(j, k - 1) = ((j % 2 == 0) ? 1.0 : -1.0) * inv_root_k;
    set_mode(k - 1, lam[k / 2]);
  }
  return basis;
}

// Sigma = S diag(eta) S^T, the covariance of the Brownian limit of the
// centered letter-count vector.  Rows sum to zero.
inline RealMatrix markov_sigma(const CyclicMarkovSpec& spec) {
  const MarkovEigenbasis basis = build_eigenbasis(spec);
  const int k = spec.k;
  RealMatrix sigma(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int c = 1; c < k; ++c)
        acc += basis.s.at(i, c) * basis.eta[c] * basis.s.at(j, c);
      sigma.at(i, j) = acc;
    }
  return sigma;
}

/**
 * True when Sigma is proportional to the exchangeable covariance with
 * unit diagonal and off-diagonal -1/(k-1), the covariance produced by
 * uniform iid letters.  Comparison is entrywise after normalizing by
 * Sigma_00, with tolerance 1e-10.
 */
inline bool check_sigma_u(const CyclicMarkovSpec& spec) {
  const RealMatrix sigma = markov_sigma(spec);
  const int k = sigma.n;
  const double diag = sigma.at(0, 0);
  if (!(diag > 0.0)) return false;
  const double off = -1.0 / (k - 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double want = (i == j) ? 1.0 : off;
      if (std::abs(sigma.at(i, j) / diag - want) > 1e-10) return false;
    }
  return true;
}

/**
 * Map a (k-1)-dimensional standard Brownian grid to the k-dimensional
 * grid with covariance markov_sigma(spec): dimension j picks up
 * S[j][c] sqrt(eta[c]) times standard coordinate c-1 for c = 1..k-1.
 */
inline BrownianGrid correlated_from_standard(const BrownianGrid& grid,
                                             const CyclicMarkovSpec& spec) {
  const MarkovEigenbasis basis = build_eigenbasis(spec);
  const int k = spec.k;
  if (grid.n_dims != k - 1)
    throw std::invalid_argument("correlated_from_standard: grid must have k-1 dimensions");
  BrownianGrid out(k, grid.n_steps);
  std::vector<double> coef(static_cast<std::size_t>(k) * (k - 1));
  for (int j = 0; j < k; ++j)
    for (int c = 1; c < k; ++c)
      coef[static_cast<std::size_t>(j) * (k - 1) + (c - 1)] =
          basis.s.at(j, c) * std::sqrt(basis.eta[c]);
  for (int s = 0; s <= grid.n_steps; ++s)
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int c = 1; c < k; ++c)
        acc += coef[static_cast<std::size_t>(j) * (k - 1) + (c - 1)] * grid.value(c - 1, s);
      out.value(j, s) = acc;
    }
  return out;
}

// Word of length n from the stationary chain: uniform start, then
// steps drawn from p by cdf inversion.  Letters are 1..k.
inline Word sample_word_markov(int n, const CyclicMarkovSpec& spec, RngStream& rng) {
  validate_cyclic_spec(spec);
  if (n <= 0) throw std::invalid_argument("sample_word_markov: length must be positive");
  const int k = spec.k;
  std::vector<double> cdf(k);
  double acc = 0.0;
  for (int r = 0; r < k; ++r) {
    acc += spec.p[r];
    cdf[r] = acc;
  }
  cdf[k - 1] = 1.0;
  Word w(n);
  int state = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k)));
  w[0] = state + 1;
  for (int i = 1; i < n; ++i) {
    const double u = rng.uniform01();
    int r = 0;
    while (cdf[r] < u) ++r;
    state = (state + r) % k;
    w[i] = state + 1;
  }
  return w;
}

}  // namespace minorlab
