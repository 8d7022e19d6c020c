#pragma once

/**
 * Dense Hermitian matrices, their eigensystems, and principal-minor
 * spectra.
 *
 * The eigensolver reduces the complex Hermitian matrix to a real symmetric
 * tridiagonal form with Householder reflectors, rotates the subdiagonal
 * real with a diagonal phase similarity, and finishes with implicit-shift
 * QL iterations.  Everything here targets small matrices (a few dozen rows
 * at most), so the reflector updates are written as plain O(n^2) full
 * updates rather than packed rank-2 kernels.
 *
 * The minor-spectra routines assemble the triangular eigenvalue pattern of
 * all leading principal minors; consecutive rows of that pattern always
 * interlace, and the assembly enforces this as a postcondition.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace minorlab {

using cplx = std::complex<double>;

class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {
    if (n <= 0) throw std::invalid_argument("HermitianMatrix: dimension must be positive");
  }

  int dim() const { return n_; }

  cplx& operator()(int i, int j) { return a_[idx(i, j)]; }
  const cplx& operator()(int i, int j) const { return a_[idx(i, j)]; }

  double trace_real() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += a_[idx(i, i)].real();
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (const cplx& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  // Largest deviation |a_ij - conj(a_ji)| over all pairs.
  double hermitian_defect() const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j <= i; ++j)
        d = std::max(d, std::abs(a_[idx(i, j)] - std::conj(a_[idx(j, i)])));
    return d;
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
      throw std::out_of_range("HermitianMatrix: index out of range");
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_;
  std::vector<cplx> a_;
};

// Eigenvalues in nonincreasing order.
struct Spectrum {
  std::vector<double> values;
};

// Eigenvalues plus matching unit eigenvectors; vectors(i,j) is component i
// of the eigenvector for values[j].
struct Eigensystem {
  std::vector<double> values;
  int n = 0;
  std::vector<cplx> vectors;

  cplx vec(int i, int j) const { return vectors[static_cast<std::size_t>(i) * n + j]; }
};

// Triangular array of principal-minor spectra: rows[k-1] holds the k
// nonincreasing eigenvalues of the order-k leading principal minor.
struct GelfandTsetlinPattern {
  std::vector<std::vector<double>> rows;

  int order() const { return static_cast<int>(rows.size()); }
};

namespace detail {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kInterlacingTolerance = 1e-9;
constexpr int kMaxQlIterations = 60;

inline void require_hermitian(const HermitianMatrix& h, const char* where) {
  const double scale = std::max(1.0, h.max_abs_entry());
  if (h.hermitian_defect() > kHermitianTolerance * scale)
    throw std::invalid_argument(std::string(where) + ": input is not Hermitian");
}

// Implicit-shift QL on a real symmetric tridiagonal matrix, accumulating
// the orthogonal transform into z (n x n, row-major).  d holds the diagonal
// and e the subdiagonal (e[i] couples rows i and i+1; e[n-1] is scratch).
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           std::vector<double>& z, int n) {
  if (n == 1) return;
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxQlIterations)
          throw std::runtime_error("tridiagonal_ql: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int row = 0; row < n; ++row) {
            f = z[static_cast<std::size_t>(row) * n + i + 1];
            z[static_cast<std::size_t>(row) * n + i + 1] =
                s * z[static_cast<std::size_t>(row) * n + i] + c * f;
            z[static_cast<std::size_t>(row) * n + i] =
                c * z[static_cast<std::size_t>(row) * n + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/**
 * Full eigensystem of a Hermitian matrix: values nonincreasing, columns of
 * `vectors` the matching orthonormal eigenvectors.  Rejects inputs whose
 * Hermitian defect exceeds 1e-12 (relative to the largest entry).
 */
inline Eigensystem eigensystem_hermitian(const HermitianMatrix& h) {
  detail::require_hermitian(h, "eigensystem_hermitian");
  const int n = h.dim();

  // Work on the exactly Hermitian average of H and H*.
  std::vector<cplx> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i) * n + j] = 0.5 * (h(i, j) + std::conj(h(j, i)));

  std::vector<cplx> q(static_cast<std::size_t>(n) * n, cplx(0.0));
  for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;

  auto at = [&](std::vector<cplx>& m, int i, int j) -> cplx& {
    return m[static_cast<std::size_t>(i) * n + j];
  };

  // Householder reduction to Hermitian tridiagonal form.
  std::vector<cplx> w(n), y(n);
  for (int k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (int i = k + 1; i < n; ++i) tail += std::norm(at(a, i, k));
    if (tail == 0.0) continue;
    const cplx x0 = at(a, k + 1, k);
    const double ax0 = std::abs(x0);
    const cplx phase = (ax0 > 0.0) ? x0 / ax0 : cplx(1.0);
    const cplx alpha = -phase * std::sqrt(tail);

    std::fill(w.begin(), w.end(), cplx(0.0));
    w[k + 1] = x0 - alpha;
    for (int i = k + 2; i < n; ++i) w[i] = at(a, i, k);
    double wn2 = 0.0;
    for (int i = k + 1; i < n; ++i) wn2 += std::norm(w[i]);
    if (wn2 <= tail * 1e-30) continue;
    const double inv = 1.0 / std::sqrt(wn2);
    for (int i = k + 1; i < n; ++i) w[i] *= inv;

    // A <- (I - 2ww*) A (I - 2ww*) via y = Aw and the rank-2 correction.
    for (int i = 0; i < n; ++i) {
      cplx acc(0.0);
      for (int j = k + 1; j < n; ++j) acc += at(a, i, j) * w[j];
      y[i] = acc;
    }
    cplx sc(0.0);
    for (int i = k + 1; i < n; ++i) sc += std::conj(w[i]) * y[i];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        cplx delta = -2.0 * w[i] * std::conj(y[j]) - 2.0 * y[i] * std::conj(w[j]) +
                     4.0 * sc * w[i] * std::conj(w[j]);
        at(a, i, j) += delta;
      }
    }
    // Q <- Q (I - 2ww*).
    for (int i = 0; i < n; ++i) {
      cplx acc(0.0);
      for (int j = k + 1; j < n; ++j) acc += at(q, i, j) * w[j];
      for (int j = k + 1; j < n; ++j) at(q, i, j) -= 2.0 * acc * std::conj(w[j]);
    }
  }

  // Phase similarity making the subdiagonal real and nonnegative.
  std::vector<double> d(n), e(n, 0.0);
  std::vector<cplx> phi(n, cplx(1.0));
  for (int i = 0; i < n; ++i) d[i] = at(a, i, i).real();
  for (int i = 0; i + 1 < n; ++i) {
    const cplx beta = at(a, i + 1, i);
    const double ab = std::abs(beta);
    e[i] = ab;
    phi[i + 1] = (ab > 0.0) ? beta * phi[i] / ab : phi[i];
  }

  std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;
  detail::tridiagonal_ql(d, e, z, n);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] > d[j]; });

  Eigensystem out;
  out.n = n;
  out.values.resize(n);
  out.vectors.assign(static_cast<std::size_t>(n) * n, cplx(0.0));
  for (int jj = 0; jj < n; ++jj) {
    const int src = order[jj];
    out.values[jj] = d[src];
    // Eigenvector = Q * diag(phi) * z(:, src).
    for (int i = 0; i < n; ++i) {
      cplx acc(0.0);
      for (int m = 0; m < n; ++m)
        acc += at(q, i, m) * phi[m] * z[static_cast<std::size_t>(m) * n + src];
      out.vectors[static_cast<std::size_t>(i) * n + jj] = acc;
    }
  }
  return out;
}

inline Spectrum eigenvalues_hermitian(const HermitianMatrix& h) {
  Eigensystem es = eigensystem_hermitian(h);
  return Spectrum{std::move(es.values)};
}

// Leading principal k x k block.
inline HermitianMatrix principal_minor(const HermitianMatrix& h, int k) {
  if (k < 1 || k > h.dim())
    throw std::invalid_argument("principal_minor: order out of range");
  HermitianMatrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = h(i, j);
  return m;
}

/**
 * Spectra of all leading principal minors, row k holding the k eigenvalues
 * of the order-k minor.  Consecutive rows must interlace,
 *   rows[k][i] >= rows[k-1][i] >= rows[k][i+1],
 * up to 1e-9; a violation indicates an eigensolver failure and throws.
 */
inline GelfandTsetlinPattern minor_spectra(const HermitianMatrix& h) {
  detail::require_hermitian(h, "minor_spectra");
  GelfandTsetlinPattern pattern;
  pattern.rows.reserve(h.dim());
  for (int k = 1; k <= h.dim(); ++k) {
    Spectrum s = eigenvalues_hermitian(principal_minor(h, k));
    pattern.rows.push_back(std::move(s.values));
  }
  for (int k = 1; k < pattern.order(); ++k) {
    const auto& lower = pattern.rows[k - 1];
    const auto& upper = pattern.rows[k];
    for (int i = 0; i < k; ++i) {
      if (upper[i] < lower[i] - detail::kInterlacingTolerance ||
          lower[i] < upper[i + 1] - detail::kInterlacingTolerance)
        throw std::runtime_error("minor_spectra: interlacing violated");
    }
  }
  return pattern;
}

// Sum of the l largest entries of pattern row k (1-based l <= k <= order).
inline double partial_sum_top(const GelfandTsetlinPattern& pattern, int l, int k) {
  if (k < 1 || k > pattern.order())
    throw std::invalid_argument("partial_sum_top: row index out of range");
  if (l < 1 || l > k)
    throw std::invalid_argument("partial_sum_top: need 1 <= l <= k");
  const auto& row = pattern.rows[k - 1];
  double s = 0.0;
  for (int i = 0; i < l; ++i) s += row[i];
  return s;
}

// Diagonal entries recovered from row sums: h_kk = sum(row k) - sum(row k-1).
inline std::vector<double> diagonal_from_pattern(const GelfandTsetlinPattern& pattern) {
  std::vector<double> diag(pattern.order());
  double prev = 0.0;
  for (int k = 0; k < pattern.order(); ++k) {
    const double cur = std::accumulate(pattern.rows[k].begin(), pattern.rows[k].end(), 0.0);
    diag[k] = cur - prev;
    prev = cur;
  }
  return diag;
}

/**
 * Weighted traceless projection for a block-diagonal ensemble.  Given block
 * sizes k_1..k_d and a probability vector p (one entry per row, constant
 * within each block, summing to 1), build J = diag(sqrt(p)) and return
 *   H - tr(HJ) J,
 * which satisfies tr((H - tr(HJ)J) J) = 0.  Applying it twice is the
 * identity on its own output.
 */
inline HermitianMatrix traceless_block_projection(const HermitianMatrix& h,
                                                  const std::vector<int>& blocks,
                                                  const std::vector<double>& p) {
  const int n = h.dim();
  int total = 0;
  for (int b : blocks) {
    if (b <= 0) throw std::invalid_argument("traceless_block_projection: block sizes must be positive");
    total += b;
  }
  if (total != n)
    throw std::invalid_argument("traceless_block_projection: block sizes must sum to the dimension");
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("traceless_block_projection: p needs one entry per row");
  double psum = 0.0;
  for (double v : p) {
    if (v <= 0.0) throw std::invalid_argument("traceless_block_projection: p entries must be positive");
    psum += v;
  }
  if (std::abs(psum - 1.0) > 1e-12)
    throw std::invalid_argument("traceless_block_projection: p must sum to 1");
  int offset = 0;
  for (int b : blocks) {
    for (int i = offset; i < offset + b; ++i)
      if (p[i] != p[offset])
        throw std::invalid_argument("traceless_block_projection: p must be constant within each block");
    offset += b;
  }

  double trace_hj = 0.0;
  for (int i = 0; i < n; ++i) trace_hj += h(i, i).real() * std::sqrt(p[i]);

  HermitianMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = h(i, j);
  for (int i = 0; i < n; ++i) out(i, i) -= trace_hj * std::sqrt(p[i]);
  return out;
}

}  // namespace minorlab
