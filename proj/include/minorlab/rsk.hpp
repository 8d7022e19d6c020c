#pragma once

/**
 * Row-insertion correspondence for words and nonnegative integer arrays,
 * Young shapes, and the subsequence statistics tied to them.
 *
 * Conventions used throughout:
 *  - words are sequences of letters 1..k, and "increasing" always means
 *    weakly increasing (nondecreasing);
 *  - insertion bumps the leftmost entry strictly greater than the incoming
 *    letter, so tableau rows weakly increase and columns strictly increase;
 *  - an N x M array w maps to the two-line word that lists, for each row
 *    i = 1..N in order, w_ij copies of letter j with j ascending.  Row i of
 *    the array is one nondecreasing run of the word.
 *
 * The first l shape rows carry the maximal total size of l disjoint
 * nondecreasing subsequences; greene_bruteforce checks that directly by
 * exhaustive assignment on tiny inputs.
 */

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace minorlab {

using Word = std::vector<int>;  // letters 1..k

// Row-major N x M array of nonnegative integer weights.
struct IntegerArray {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<long long> w;

  IntegerArray() = default;
  IntegerArray(int n, int m) : n_rows(n), n_cols(m), w(static_cast<std::size_t>(n) * m, 0) {
    if (n <= 0 || m <= 0) throw std::invalid_argument("IntegerArray: dimensions must be positive");
  }

  long long& at(int i, int j) { return w[index(i, j)]; }
  long long at(int i, int j) const { return w[index(i, j)]; }

  long long total() const {
    long long t = 0;
    for (long long v : w) t += v;
    return t;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= n_rows || j < 0 || j >= n_cols)
      throw std::out_of_range("IntegerArray: index out of range");
    return static_cast<std::size_t>(i) * n_cols + j;
  }
};

// Partition written as nonincreasing positive parts.
struct YoungShape {
  std::vector<long long> parts;

  long long size() const {
    long long t = 0;
    for (long long p : parts) t += p;
    return t;
  }
  long long part(int i) const {  // zero-padded access, 0-based
    return (i >= 0 && i < static_cast<int>(parts.size())) ? parts[i] : 0;
  }
};

struct Tableau {
  std::vector<std::vector<int>> rows;

  YoungShape shape() const {
    YoungShape s;
    s.parts.reserve(rows.size());
    for (const auto& r : rows) s.parts.push_back(static_cast<long long>(r.size()));
    return s;
  }
};

// Triangular array of shapes: rows[k-1] is the shape of the word restricted
// to letters <= k (zero-padded to k parts).
struct ShapePattern {
  std::vector<std::vector<long long>> rows;

  int order() const { return static_cast<int>(rows.size()); }
};

namespace detail {

// Insert one letter by row bumping; returns the row where it settled.
inline int row_insert(Tableau& p, int letter) {
  int r = 0;
  int x = letter;
  for (;; ++r) {
    if (r == static_cast<int>(p.rows.size())) p.rows.emplace_back();
    auto& row = p.rows[r];
    auto it = std::upper_bound(row.begin(), row.end(), x);
    if (it == row.end()) {
      row.push_back(x);
      return r;
    }
    std::swap(x, *it);
  }
}

inline void require_word(const Word& word, const char* where) {
  for (int x : word)
    if (x < 1) throw std::invalid_argument(std::string(where) + ": letters must be >= 1");
}

}  // namespace detail

/**
 * Insertion and recording tableaux of a word.  P is semistandard in the
 * letters; Q is standard in the positions 1..N and has the same shape.
 */
inline std::pair<Tableau, Tableau> rsk_word(const Word& word) {
  detail::require_word(word, "rsk_word");
  Tableau p, q;
  for (std::size_t t = 0; t < word.size(); ++t) {
    const int r = detail::row_insert(p, word[t]);
    if (r == static_cast<int>(q.rows.size())) q.rows.emplace_back();
    q.rows[r].push_back(static_cast<int>(t) + 1);
  }
  return {std::move(p), std::move(q)};
}

inline YoungShape rsk_word_shape(const Word& word) {
  detail::require_word(word, "rsk_word_shape");
  Tableau p;
  for (int x : word) detail::row_insert(p, x);
  return p.shape();
}

// Insertion tableau of an integer array via its two-line word.
inline Tableau rsk_array_tableau(const IntegerArray& w) {
  for (long long v : w.w)
    if (v < 0) throw std::invalid_argument("rsk_array_tableau: weights must be nonnegative");
  Tableau p;
  for (int i = 0; i < w.n_rows; ++i)
    for (int j = 0; j < w.n_cols; ++j)
      for (long long c = 0; c < w.at(i, j); ++c) detail::row_insert(p, j + 1);
  return p;
}

inline YoungShape rsk_array(const IntegerArray& w) { return rsk_array_tableau(w).shape(); }

/**
 * Shapes of all column truncations of an array: row k is the shape of the
 * array restricted to its first k columns, zero-padded to k parts.
 * Consecutive rows interlace (restriction removes a horizontal strip); a
 * violation would mean the insertion is broken, so it throws.
 */
inline ShapePattern shape_pattern_from_array(const IntegerArray& w) {
  ShapePattern pattern;
  pattern.rows.reserve(w.n_cols);
  for (int k = 1; k <= w.n_cols; ++k) {
    IntegerArray trunc(w.n_rows, k);
    for (int i = 0; i < w.n_rows; ++i)
      for (int j = 0; j < k; ++j) trunc.at(i, j) = w.at(i, j);
    const YoungShape s = rsk_array(trunc);
    std::vector<long long> row(static_cast<std::size_t>(k), 0);
    if (static_cast<int>(s.parts.size()) > k)
      throw std::runtime_error("shape_pattern_from_array: shape has too many parts");
    for (std::size_t i = 0; i < s.parts.size(); ++i) row[i] = s.parts[i];
    pattern.rows.push_back(std::move(row));
  }
  for (int k = 1; k < pattern.order(); ++k) {
    const auto& lower = pattern.rows[k - 1];
    const auto& upper = pattern.rows[k];
    for (int i = 0; i < k; ++i)
      if (upper[i] < lower[i] || (i + 1 <= k && lower[i] < upper[i + 1]))
        throw std::runtime_error("shape_pattern_from_array: interlacing violated");
  }
  return pattern;
}

/**
 * Length of the longest nondecreasing subsequence by patience sorting:
 * each letter replaces the first pile tail strictly greater than it.
 * Equals the first part of the word's shape.
 */
inline long long longest_nondecreasing_subsequence(const Word& word) {
  detail::require_word(word, "longest_nondecreasing_subsequence");
  std::vector<int> tails;
  for (int x : word) {
    auto it = std::upper_bound(tails.begin(), tails.end(), x);
    if (it == tails.end())
      tails.push_back(x);
    else
      *it = x;
  }
  return static_cast<long long>(tails.size());
}

namespace detail {

struct GreeneSearch {
  const Word* word = nullptr;
  int n = 0;
  int n_classes = 0;
  long long best = 0;

  // lasts[c] = last letter of class c so far (0 = empty).  Canonical order:
  // a class may only open after its predecessor has opened.
  void run(int pos, int used, long long size, std::vector<int>& lasts) {
    best = std::max(best, size);
    if (pos == n) return;
    if (size + (n - pos) <= best) return;  // can't beat the incumbent
    const int x = (*word)[pos];
    const int open_limit = std::min(used + 1, n_classes);
    for (int c = 0; c < open_limit; ++c) {
      if (lasts[c] <= x) {
        const int saved = lasts[c];
        lasts[c] = x;
        run(pos + 1, std::max(used, c + 1), size + 1, lasts);
        lasts[c] = saved;
      }
    }
    run(pos + 1, used, size, lasts);  // leave this position unused
  }
};

}  // namespace detail

/**
 * Exact maximum total size of l disjoint nondecreasing subsequences,
 * by exhaustive assignment of positions to subsequences.  Intended for
 * words of at most ~12 letters; longer input is rejected rather than left
 * to run forever.
 */
inline long long greene_bruteforce(const Word& word, int l) {
  detail::require_word(word, "greene_bruteforce");
  if (l < 1) throw std::invalid_argument("greene_bruteforce: l must be positive");
  if (word.size() > 12)
    throw std::invalid_argument("greene_bruteforce: word too long for exhaustive search");
  detail::GreeneSearch search;
  search.word = &word;
  search.n = static_cast<int>(word.size());
  search.n_classes = l;
  std::vector<int> lasts(l, 0);
  search.run(0, 0, 0, lasts);
  return search.best;
}

inline Word array_to_word(const IntegerArray& w) {
  Word out;
  out.reserve(static_cast<std::size_t>(w.total()));
  for (int i = 0; i < w.n_rows; ++i)
    for (int j = 0; j < w.n_cols; ++j)
      for (long long c = 0; c < w.at(i, j); ++c) out.push_back(j + 1);
  return out;
}

inline long long greene_bruteforce(const IntegerArray& w, int l) {
  return greene_bruteforce(array_to_word(w), l);
}

/**
 * Centered and scaled shape coordinates: part i (zero-padded) maps to
 * (part_i - centers[i]) / scales[i].  The shape may not have more parts
 * than there are centers.
 */
inline std::vector<double> rescale_shape(const YoungShape& shape,
                                         const std::vector<double>& centers,
                                         const std::vector<double>& scales) {
  if (centers.size() != scales.size())
    throw std::invalid_argument("rescale_shape: centers and scales must have equal length");
  if (shape.parts.size() > centers.size())
    throw std::invalid_argument("rescale_shape: shape has more parts than centers");
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!(scales[i] > 0.0)) throw std::invalid_argument("rescale_shape: scales must be positive");
    out[i] = (static_cast<double>(shape.part(static_cast<int>(i))) - centers[i]) / scales[i];
  }
  return out;
}

}  // namespace minorlab
