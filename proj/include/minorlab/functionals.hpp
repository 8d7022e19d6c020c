#pragma once

/**
 * Maximal functionals of Brownian grids: the staircase increment sum, its
 * maximum over ordered path collections, and the limit-law functionals and
 * samplers built from them.
 *
 * The continuum object is sup over nondecreasing time staircases
 * 0 = t_0 <= ... <= t_k = 1 of sum_j (B_j(t_j) - B_j(t_{j-1})), and its
 * l-path generalization.  On a grid the supremum is realized as the
 * maximal-weight collection of l ordered full-span up-right paths over the
 * n_steps x k array of increments (multipath_lpp_dp).  Discretization adds
 * at most one shared cell per level switch relative to the pure staircase
 * sum, which vanishes as n_steps grows; the grid restriction itself biases
 * the supremum downward.  Default mesh: 4096 steps.
 */

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "minorlab/hermitian.hpp"
#include "minorlab/markov.hpp"
#include "minorlab/paths.hpp"
#include "minorlab/sampling.hpp"

namespace minorlab {

inline constexpr int kDefaultFunctionalSteps = 4096;

// Nondecreasing breakpoints 0 = t_0 <= ... <= t_M = 1; level j runs on
// [t_{j-1}, t_j).  Breakpoints must sit on the grid mesh in use.
struct StepTimePath {
  std::vector<double> breakpoints;
};

namespace detail {

inline int grid_step_of(double t, int n_steps, const char* where) {
  const double scaled = t * n_steps;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-12 * n_steps)
    throw std::invalid_argument(std::string(where) + ": breakpoint not grid-aligned");
  if (rounded < 0.0 || rounded > static_cast<double>(n_steps))
    throw std::invalid_argument(std::string(where) + ": breakpoint outside [0,1]");
  return static_cast<int>(rounded);
}

}  // namespace detail

// sum_{j=1}^M (B_j(t_j) - B_j(t_{j-1})) for the staircase's breakpoints.
inline double delta_functional(const BrownianGrid& grid, const StepTimePath& path) {
  const int m = static_cast<int>(path.breakpoints.size()) - 1;
  if (m < 1) throw std::invalid_argument("delta_functional: need at least two breakpoints");
  if (m > grid.n_dims)
    throw std::invalid_argument("delta_functional: more levels than grid dimensions");
  std::vector<int> step(m + 1);
  for (int j = 0; j <= m; ++j)
    step[j] = detail::grid_step_of(path.breakpoints[j], grid.n_steps, "delta_functional");
  if (step[0] != 0 || step[m] != grid.n_steps)
    throw std::invalid_argument("delta_functional: breakpoints must run from 0 to 1");
  for (int j = 1; j <= m; ++j)
    if (step[j] < step[j - 1])
      throw std::invalid_argument("delta_functional: breakpoints must be nondecreasing");
  double total = 0.0;
  for (int j = 1; j <= m; ++j)
    total += grid.value(j - 1, step[j]) - grid.value(j - 1, step[j - 1]);
  return total;
}

// Increment array of the first k dimensions: cell (s, j) holds
// B_j(s/n) - B_j((s-1)/n).
inline WeightArray brownian_increments(const BrownianGrid& grid, int k) {
  if (k < 1 || k > grid.n_dims)
    throw std::invalid_argument("brownian_increments: dimension count out of range");
  WeightArray w(grid.n_steps, k);
  for (int s = 1; s <= grid.n_steps; ++s)
    for (int j = 0; j < k; ++j) w.at(s - 1, j) = grid.increment(j, s);
  return w;
}

/**
 * Grid supremum of sum_{i=1}^l Delta_{pi_i}(B) over ordered staircases
 * pi_1 < ... < pi_l <= k, computed as the maximal l-path collection on the
 * increment array.  For l == k the ordering forces the full sum
 * sum_{j<=k} B_j(1) exactly.
 */
inline double max_functional(const BrownianGrid& grid, int l, int k) {
  if (l < 1 || l > k)
    throw std::invalid_argument("max_functional: need 1 <= l <= k");
  return multipath_lpp_dp(brownian_increments(grid, k), l);
}

/**
 * Brownian representation of the rescaled top letter-count limit:
 * ((sqrt(1 - k1 p_max) - 1)/k1) sum_{j<=k1} B_j(1) + max_functional(grid, 1, k1).
 * Requires 0 < p_max <= 1/k1.
 */
inline double hl1_limit_functional(const BrownianGrid& grid, double p_max, int k1) {
  if (k1 < 1 || k1 > grid.n_dims)
    throw std::invalid_argument("hl1_limit_functional: k1 out of range");
  if (!(p_max > 0.0))
    throw std::invalid_argument("hl1_limit_functional: p_max must be positive");
  const double radicand = 1.0 - k1 * p_max;
  if (radicand < -1e-12)
    throw std::invalid_argument("hl1_limit_functional: need k1 * p_max <= 1");
  const double coeff = (std::sqrt(std::max(radicand, 0.0)) - 1.0) / k1;
  double ends = 0.0;
  for (int j = 0; j < k1; ++j) ends += grid.value(j, grid.n_steps);
  return coeff * ends + max_functional(grid, 1, k1);
}

/**
 * Matrix-side samplers of the same limit law, from one GUE draw of order
 * k1.  kTraceMix combines the diagonal sum with the top eigenvalue;
 * kGaussianSplit centers the top eigenvalue by the trace and adds an
 * independent Gaussian.  Both have the law of the hl1 functional.
 */
enum class GueLimitVariant { kTraceMix, kGaussianSplit };

inline double gue_limit_sample(int k1, double p_max, RngStream& rng, GueLimitVariant variant) {
  if (k1 < 1) throw std::invalid_argument("gue_limit_sample: k1 must be positive");
  if (!(p_max > 0.0))
    throw std::invalid_argument("gue_limit_sample: p_max must be positive");
  const double radicand = 1.0 - k1 * p_max;
  if (radicand < -1e-12)
    throw std::invalid_argument("gue_limit_sample: need k1 * p_max <= 1");
  const HermitianMatrix h = sample_gue(k1, rng);
  const Spectrum spectrum = eigenvalues_hermitian(h);
  const double top = spectrum.values.front();
  const double trace = h.trace_real();
  if (variant == GueLimitVariant::kTraceMix)
    return ((std::sqrt(std::max(radicand, 0.0)) - 1.0) / k1) * trace + top;
  const double z = rng.normal();
  return top - p_max * trace - std::sqrt(std::max(p_max * radicand, 0.0)) * z;
}

// Single-staircase supremum on a (typically correlated) k-dimensional grid.
inline double markov_limit_functional(const BrownianGrid& grid, int k) {
  if (grid.n_dims != k)
    throw std::invalid_argument("markov_limit_functional: grid dimension mismatch");
  return multipath_lpp_dp(brownian_increments(grid, k), 1);
}

/**
 * Chain limit functional evaluated from a (k-1)-dimensional standard grid:
 * transports the grid to the chain's correlated Brownian motion and takes
 * the single-staircase supremum.  The trigonometric expansion of the same
 * quantity serves as an independent recomputation in the test suite.
 */
inline double proposition_functional(const BrownianGrid& grid, const CyclicMarkovSpec& spec) {
  if (grid.n_dims != spec.k - 1)
    throw std::invalid_argument("proposition_functional: grid must have k-1 dimensions");
  return markov_limit_functional(correlated_from_standard(grid, spec), spec.k);
}

}  // namespace minorlab
