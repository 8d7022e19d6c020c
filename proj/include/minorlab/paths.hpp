#pragma once

/**
 * Up-right lattice paths on the grid {1..N} x {1..k} and maximal-weight
 * collections of them.
 *
 * A path is a point sequence whose consecutive steps increase the abscissa
 * or the ordinate by one; its support is the set of visited cells.  A
 * collection of paths with pairwise disjoint supports can always be
 * massaged, without losing covered cells, into a collection whose paths
 * all start at abscissa 1, all end at abscissa N, and sit strictly above
 * one another; normalize_starts / normalize_ends / order_paths implement
 * those three constructive steps.  For nonnegative weights this is why the
 * maximum over arbitrary disjoint collections equals the maximum over
 * ordered full-span collections, and the dynamic program at the bottom of
 * this header computes the latter for arbitrary real weights.
 *
 * DP state: after processing column n, the strictly increasing l-tuple of
 * ordinates at which the l paths cross into column n+1.  A transition into
 * column n+1 picks the new crossing tuple X' >= X componentwise with
 * X'_r < X_{r+1}, and collects the vertical segments [X_r, X'_r] of column
 * n+1.  Cost is O(N * C(k,l)^2 * l).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "minorlab/rng.hpp"
#include "minorlab/rsk.hpp"

namespace minorlab {

struct GridPoint {
  int x = 0;  // abscissa, 1..N
  int y = 0;  // ordinate, 1..k

  bool operator==(const GridPoint& o) const { return x == o.x && y == o.y; }
};

struct UpRightPath {
  std::vector<GridPoint> points;

  const GridPoint& start() const { return points.front(); }
  const GridPoint& end() const { return points.back(); }
};

struct PathCollection {
  int n_abscissa = 0;  // N
  int n_ordinate = 0;  // k
  std::vector<UpRightPath> paths;
};

// Real weights on the same grid; cell (x, y) is at(x-1, y-1).
struct WeightArray {
  int n_abscissa = 0;
  int n_ordinate = 0;
  std::vector<double> w;

  WeightArray() = default;
  WeightArray(int n, int k)
      : n_abscissa(n), n_ordinate(k), w(static_cast<std::size_t>(n) * k, 0.0) {
    if (n <= 0 || k <= 0) throw std::invalid_argument("WeightArray: dimensions must be positive");
  }

  double& at(int i, int j) { return w[index(i, j)]; }
  double at(int i, int j) const { return w[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= n_abscissa || j < 0 || j >= n_ordinate)
      throw std::out_of_range("WeightArray: index out of range");
    return static_cast<std::size_t>(i) * n_ordinate + j;
  }
};

inline WeightArray weights_from_integer_array(const IntegerArray& a) {
  WeightArray w(a.n_rows, a.n_cols);
  for (int i = 0; i < a.n_rows; ++i)
    for (int j = 0; j < a.n_cols; ++j) w.at(i, j) = static_cast<double>(a.at(i, j));
  return w;
}

namespace detail {

inline void require_valid_path(const UpRightPath& p, int n, int k, const char* where) {
  if (p.points.empty()) throw std::invalid_argument(std::string(where) + ": empty path");
  for (const GridPoint& g : p.points)
    if (g.x < 1 || g.x > n || g.y < 1 || g.y > k)
      throw std::invalid_argument(std::string(where) + ": point outside grid");
  for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
    const GridPoint& a = p.points[i];
    const GridPoint& b = p.points[i + 1];
    const bool right = (b.x == a.x + 1 && b.y == a.y);
    const bool up = (b.x == a.x && b.y == a.y + 1);
    if (!right && !up)
      throw std::invalid_argument(std::string(where) + ": step is not up or right");
  }
}

// Occupancy bitmap of all supports; throws if two paths share a cell.
inline std::vector<char> support_map(const PathCollection& c, const char* where) {
  std::vector<char> occ(static_cast<std::size_t>(c.n_abscissa) * c.n_ordinate, 0);
  for (const UpRightPath& p : c.paths) {
    require_valid_path(p, c.n_abscissa, c.n_ordinate, where);
    for (const GridPoint& g : p.points) {
      char& cell = occ[static_cast<std::size_t>(g.x - 1) * c.n_ordinate + (g.y - 1)];
      if (cell) throw std::invalid_argument(std::string(where) + ": supports are not disjoint");
      cell = 1;
    }
  }
  return occ;
}

inline bool occupied(const std::vector<char>& occ, int k, int x, int y) {
  return occ[static_cast<std::size_t>(x - 1) * k + (y - 1)] != 0;
}

inline void set_cell(std::vector<char>& occ, int k, int x, int y, char v) {
  occ[static_cast<std::size_t>(x - 1) * k + (y - 1)] = v;
}

}  // namespace detail

// Total weight collected by all supports; requires pairwise disjointness.
inline double collection_weight(const WeightArray& w, const PathCollection& c) {
  if (c.n_abscissa != w.n_abscissa || c.n_ordinate != w.n_ordinate)
    throw std::invalid_argument("collection_weight: grid shape mismatch");
  detail::support_map(c, "collection_weight");
  double total = 0.0;
  for (const UpRightPath& p : c.paths)
    for (const GridPoint& g : p.points) total += w.at(g.x - 1, g.y - 1);
  return total;
}

/**
 * Push every starting point to abscissa 1 without shrinking the union of
 * supports.  Repeatedly takes a path with maximal starting abscissa and
 * either prepends the free cell on its left, or splices itself onto the
 * path occupying that cell.  Needs l <= k; for l == k the k full
 * horizontal lines already contain any disjoint collection.
 */
inline PathCollection normalize_starts(const PathCollection& input) {
  const int n = input.n_abscissa, k = input.n_ordinate;
  const int l = static_cast<int>(input.paths.size());
  if (l > k) throw std::invalid_argument("normalize_starts: more paths than ordinates");
  std::vector<char> occ = detail::support_map(input, "normalize_starts");
  if (l == 0) return input;

  if (l == k) {
    PathCollection out;
    out.n_abscissa = n;
    out.n_ordinate = k;
    for (int y = 1; y <= k; ++y) {
      UpRightPath line;
      for (int x = 1; x <= n; ++x) line.points.push_back({x, y});
      out.paths.push_back(std::move(line));
    }
    return out;
  }

  PathCollection c = input;
  const int iteration_cap = 4 * n * k * (l + 1) + 16;
  for (int round = 0;; ++round) {
    if (round > iteration_cap) throw std::logic_error("normalize_starts: failed to terminate");
    int sa_max = 1, i0 = -1;
    for (int i = 0; i < l; ++i) {
      const int sx = c.paths[i].start().x;
      if (sx > sa_max) {
        sa_max = sx;
        i0 = i;
      }
    }
    if (sa_max == 1) break;

    const GridPoint p{sa_max - 1, c.paths[i0].start().y};
    int i1 = -1;
    std::size_t p_pos = 0;
    for (int i = 0; i < l && i1 < 0; ++i) {
      if (i == i0) continue;
      for (std::size_t t = 0; t < c.paths[i].points.size(); ++t)
        if (c.paths[i].points[t] == p) {
          i1 = i;
          p_pos = t;
          break;
        }
    }

    if (i1 < 0) {
      c.paths[i0].points.insert(c.paths[i0].points.begin(), p);
      detail::set_cell(occ, k, p.x, p.y, 1);
      continue;
    }

    if (p_pos + 1 == c.paths[i1].points.size()) {
      // The blocking path ends exactly at P: splice it in front of path i0
      // and restart the blocker as a single point in column 1.
      std::vector<GridPoint> merged = c.paths[i1].points;
      merged.insert(merged.end(), c.paths[i0].points.begin(), c.paths[i0].points.end());
      c.paths[i0].points = std::move(merged);
      c.paths[i1].points.clear();

      int free_y = -1;
      for (int y = 1; y <= k && free_y < 0; ++y)
        if (!detail::occupied(occ, k, 1, y)) free_y = y;
      if (free_y < 0) {
        // Column 1 fully covered by at most k-1 runs, so some path starts
        // there vertically; shrinking it by its first point frees a cell.
        int i2 = -1;
        for (int i = 0; i < l && i2 < 0; ++i) {
          if (i == i1 || c.paths[i].points.size() < 2) continue;
          const GridPoint& s = c.paths[i].points[0];
          const GridPoint& s2 = c.paths[i].points[1];
          if (s.x == 1 && s2.x == 1) i2 = i;
        }
        if (i2 < 0) throw std::logic_error("normalize_starts: no vertical start to shrink");
        free_y = c.paths[i2].points[0].y;
        c.paths[i2].points.erase(c.paths[i2].points.begin());
        detail::set_cell(occ, k, 1, free_y, 0);
      }
      c.paths[i1].points = {GridPoint{1, free_y}};
      detail::set_cell(occ, k, 1, free_y, 1);
    } else {
      // The blocking path continues past P; its next point must sit just
      // above P (the cell right of P is path i0's start, which is taken).
      const GridPoint& next = c.paths[i1].points[p_pos + 1];
      if (!(next.x == p.x && next.y == p.y + 1))
        throw std::logic_error("normalize_starts: unexpected successor of P");
      std::vector<GridPoint> prefix(c.paths[i1].points.begin(),
                                    c.paths[i1].points.begin() + p_pos + 1);
      std::vector<GridPoint> suffix(c.paths[i1].points.begin() + p_pos + 1,
                                    c.paths[i1].points.end());
      prefix.insert(prefix.end(), c.paths[i0].points.begin(), c.paths[i0].points.end());
      c.paths[i0].points = std::move(prefix);
      c.paths[i1].points = std::move(suffix);
    }
  }
  detail::support_map(c, "normalize_starts(post)");
  return c;
}

/**
 * Push every ending point to abscissa N.  Requires all starting abscissas
 * to be 1 already (run normalize_starts first).  Mirror image of the start
 * normalization, except no restart case is needed: the predecessor of the
 * blocking cell is always the cell just below it.
 */
inline PathCollection normalize_ends(const PathCollection& input) {
  const int n = input.n_abscissa, k = input.n_ordinate;
  const int l = static_cast<int>(input.paths.size());
  if (l > k) throw std::invalid_argument("normalize_ends: more paths than ordinates");
  std::vector<char> occ = detail::support_map(input, "normalize_ends");
  for (const UpRightPath& p : input.paths)
    if (p.start().x != 1)
      throw std::invalid_argument("normalize_ends: paths must start at abscissa 1");
  if (l == 0) return input;

  PathCollection c = input;
  const int iteration_cap = 4 * n * k * (l + 1) + 16;
  for (int round = 0;; ++round) {
    if (round > iteration_cap) throw std::logic_error("normalize_ends: failed to terminate");
    int ea_min = n, i0 = -1;
    for (int i = 0; i < l; ++i) {
      const int ex = c.paths[i].end().x;
      if (ex < ea_min) {
        ea_min = ex;
        i0 = i;
      }
    }
    if (ea_min == n) break;

    const GridPoint p{ea_min + 1, c.paths[i0].end().y};
    int i1 = -1;
    std::size_t p_pos = 0;
    for (int i = 0; i < l && i1 < 0; ++i) {
      if (i == i0) continue;
      for (std::size_t t = 0; t < c.paths[i].points.size(); ++t)
        if (c.paths[i].points[t] == p) {
          i1 = i;
          p_pos = t;
          break;
        }
    }

    if (i1 < 0) {
      c.paths[i0].points.push_back(p);
      detail::set_cell(occ, k, p.x, p.y, 1);
      continue;
    }

    // P cannot start the blocking path (that one starts at abscissa 1) and
    // its predecessor cannot be the cell left of P (that is path i0's end),
    // so the predecessor is the cell just below P.
    if (p_pos == 0) throw std::logic_error("normalize_ends: blocking path starts at P");
    const GridPoint& prev = c.paths[i1].points[p_pos - 1];
    if (!(prev.x == p.x && prev.y == p.y - 1))
      throw std::logic_error("normalize_ends: unexpected predecessor of P");
    std::vector<GridPoint> suffix(c.paths[i1].points.begin() + p_pos, c.paths[i1].points.end());
    std::vector<GridPoint> prefix(c.paths[i1].points.begin(),
                                  c.paths[i1].points.begin() + p_pos);
    c.paths[i0].points.insert(c.paths[i0].points.end(), suffix.begin(), suffix.end());
    c.paths[i1].points = std::move(prefix);
  }
  detail::support_map(c, "normalize_ends(post)");
  return c;
}

/**
 * Re-index fully-spanning disjoint paths so that each sits strictly below
 * the next at every abscissa.  Disjoint full-span paths cannot cross, so
 * sorting by starting ordinate realizes the order; the result is verified.
 */
inline PathCollection order_paths(const PathCollection& input) {
  const int n = input.n_abscissa;
  detail::support_map(input, "order_paths");
  for (const UpRightPath& p : input.paths)
    if (p.start().x != 1 || p.end().x != n)
      throw std::invalid_argument("order_paths: paths must span abscissas 1..N");

  PathCollection c = input;
  std::sort(c.paths.begin(), c.paths.end(),
            [](const UpRightPath& a, const UpRightPath& b) { return a.start().y < b.start().y; });

  // lo/hi ordinate of each path per abscissa; consecutive paths must nest
  // strictly.
  const int l = static_cast<int>(c.paths.size());
  for (int r = 0; r + 1 < l; ++r) {
    std::vector<int> hi(n + 1, 0), lo(n + 1, 0);
    for (const GridPoint& g : c.paths[r].points) hi[g.x] = std::max(hi[g.x], g.y);
    for (const GridPoint& g : c.paths[r + 1].points)
      lo[g.x] = (lo[g.x] == 0) ? g.y : std::min(lo[g.x], g.y);
    for (int x = 1; x <= n; ++x)
      if (hi[x] >= lo[x]) throw std::logic_error("order_paths: paths are not strictly ordered");
  }
  return c;
}

namespace detail {

// All full-span up-right paths, built by extending rightward/upward.
inline void enumerate_full_span(int n, int k, std::vector<UpRightPath>& out) {
  std::vector<GridPoint> stack;
  auto dfs = [&](auto&& self, int x, int y) -> void {
    stack.push_back({x, y});
    if (x == n) {
      out.push_back(UpRightPath{stack});
    }
    if (x < n) self(self, x + 1, y);
    if (y < k) self(self, x, y + 1);
    stack.pop_back();
  };
  for (int y = 1; y <= k; ++y) dfs(dfs, 1, y);
}

// True if a sits strictly below b at every abscissa (both full span).
inline bool strictly_below(const UpRightPath& a, const UpRightPath& b, int n) {
  std::vector<int> hi(n + 1, 0), lo(n + 1, 1 << 30);
  for (const GridPoint& g : a.points) hi[g.x] = std::max(hi[g.x], g.y);
  for (const GridPoint& g : b.points) lo[g.x] = std::min(lo[g.x], g.y);
  for (int x = 1; x <= n; ++x)
    if (hi[x] >= lo[x]) return false;
  return true;
}

}  // namespace detail

/**
 * Exact maximum of collection_weight over all ordered full-span
 * collections of l paths, by explicit enumeration.  Only for tiny grids
 * (N*k <= 16); rejects anything larger.
 */
inline double multipath_lpp_bruteforce(const WeightArray& w, int l) {
  const int n = w.n_abscissa, k = w.n_ordinate;
  if (n * k > 16) throw std::invalid_argument("multipath_lpp_bruteforce: grid too large");
  if (l < 1 || l > k) throw std::invalid_argument("multipath_lpp_bruteforce: need 1 <= l <= k");

  std::vector<UpRightPath> all;
  detail::enumerate_full_span(n, k, all);
  const int m = static_cast<int>(all.size());
  std::vector<double> weight(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (const GridPoint& g : all[i].points) weight[i] += w.at(g.x - 1, g.y - 1);
  // Paths sorted by starting ordinate already (enumeration order); ordered
  // tuples are found by pairwise comparison.
  std::vector<std::vector<char>> below(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) below[i][j] = detail::strictly_below(all[i], all[j], n) ? 1 : 0;

  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int depth, double acc) -> void {
    if (depth == l) {
      best = std::max(best, acc);
      return;
    }
    for (int i = 0; i < m; ++i) {
      if (!chosen.empty() && !below[chosen.back()][i]) continue;
      chosen.push_back(i);
      self(self, depth + 1, acc + weight[i]);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

/**
 * Maximum total weight of l ordered full-span paths via the crossing-tuple
 * dynamic program described at the top of this header.  Exact for real
 * weights; for nonnegative weights it also equals the maximum over all
 * disjoint collections, ordered or not.
 */
inline double multipath_lpp_dp(const WeightArray& w, int l) {
  const int n = w.n_abscissa, k = w.n_ordinate;
  if (l < 1 || l > k) throw std::invalid_argument("multipath_lpp_dp: need 1 <= l <= k");
  if (k > 30) throw std::invalid_argument("multipath_lpp_dp: ordinate range too large");

  // Enumerate strictly increasing l-tuples over {1..k}.
  std::vector<std::vector<int>> states;
  std::vector<int> tuple(l);
  auto gen = [&](auto&& self, int pos, int low) -> void {
    if (pos == l) {
      states.push_back(tuple);
      return;
    }
    for (int y = low; y <= k - (l - 1 - pos); ++y) {
      tuple[pos] = y;
      self(self, pos + 1, y + 1);
    }
  };
  gen(gen, 0, 1);
  const int ns = static_cast<int>(states.size());

  // pred[t] lists source states X for target X': X_r <= X'_r, X'_r < X_{r+1}.
  std::vector<std::vector<int>> pred(ns);
  for (int t = 0; t < ns; ++t) {
    for (int s = 0; s < ns; ++s) {
      bool ok = true;
      for (int r = 0; r < l && ok; ++r) {
        if (states[s][r] > states[t][r]) ok = false;
        if (r + 1 < l && states[t][r] >= states[s][r + 1]) ok = false;
      }
      if (ok) pred[t].push_back(s);
    }
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> value(ns, 0.0), next(ns, neg_inf), reach(ns, neg_inf);
  std::vector<double> prefix(k + 1, 0.0);
  for (int col = 0; col < n; ++col) {
    for (int y = 0; y < k; ++y) prefix[y + 1] = prefix[y] + w.at(col, y);
    for (int s = 0; s < ns; ++s) {
      double below_entry = 0.0;
      for (int r = 0; r < l; ++r) below_entry += prefix[states[s][r] - 1];
      reach[s] = value[s] - below_entry;
    }
    for (int t = 0; t < ns; ++t) {
      double best = neg_inf;
      for (int s : pred[t]) best = std::max(best, reach[s]);
      double top = 0.0;
      for (int r = 0; r < l; ++r) top += prefix[states[t][r]];
      next[t] = best + top;
    }
    value.swap(next);
  }
  double best = neg_inf;
  for (int s = 0; s < ns; ++s) best = std::max(best, value[s]);
  return best;
}

/**
 * Random disjoint path collection for property tests and self-checks:
 * l distinct seed cells grown by random admissible front/back extensions.
 * Paths need not start at abscissa 1 nor span the grid.
 */
inline PathCollection random_disjoint_collection(int n, int k, int l, RngStream& rng) {
  if (l < 0 || l > n * k)
    throw std::invalid_argument("random_disjoint_collection: too many paths");
  PathCollection c;
  c.n_abscissa = n;
  c.n_ordinate = k;
  std::vector<char> occ(static_cast<std::size_t>(n) * k, 0);
  auto taken = [&](int x, int y) { return detail::occupied(occ, k, x, y); };

  for (int i = 0; i < l; ++i) {
    int x, y;
    do {
      x = 1 + static_cast<int>(rng.uniform_below(n));
      y = 1 + static_cast<int>(rng.uniform_below(k));
    } while (taken(x, y));
    detail::set_cell(occ, k, x, y, 1);
    c.paths.push_back(UpRightPath{{GridPoint{x, y}}});
  }

  const int growth_rounds = 2 * (n + k) * std::max(l, 1);
  for (int round = 0; round < growth_rounds; ++round) {
    if (l == 0) break;
    UpRightPath& p = c.paths[rng.uniform_below(l)];
    const bool at_back = rng.uniform_below(2) == 0;
    const bool move_x = rng.uniform_below(2) == 0;
    GridPoint g = at_back ? p.end() : p.start();
    if (at_back) {
      if (move_x) ++g.x; else ++g.y;
    } else {
      if (move_x) --g.x; else --g.y;
    }
    if (g.x < 1 || g.x > n || g.y < 1 || g.y > k || taken(g.x, g.y)) continue;
    detail::set_cell(occ, k, g.x, g.y, 1);
    if (at_back)
      p.points.push_back(g);
    else
      p.points.insert(p.points.begin(), g);
  }
  return c;
}

}  // namespace minorlab
