//
// Copyright 2026 The privfact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVFACT_WORKLOADS_HPP_
#define PRIVFACT_WORKLOADS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "privfact/errors.hpp"
#include "privfact/gamma2.hpp"
#include "privfact/matrix.hpp"
#include "privfact/rng.hpp"

namespace privfact {

// A query matrix together with human-readable labels. Symmetric workloads
// carry the column pairing x <-> -x (pairing[j] is the index of -x_j).
struct Workload {
  Matrix w;
  std::string name;
  std::vector<std::string> query_labels;
  std::vector<std::string> universe_labels;
  std::vector<int> pairing;
  bool symmetric = false;
};

inline constexpr long kMaxUniverse = 1 << 20;

namespace detail {

// Subsets of {0..d-1} with size at most w, ordered by size then
// lexicographically by elements.
inline std::vector<std::vector<int>> subsets_up_to(int d, int w) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  std::vector<int> cur;
  for (int size = 1; size <= w; ++size) {
    cur.assign(size, 0);
    for (int i = 0; i < size; ++i) cur[i] = i;
    while (true) {
      out.push_back(cur);
      int i = size - 1;
      while (i >= 0 && cur[i] == d - size + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
  return out;
}

inline std::string subset_label(const std::vector<int>& s) {
  std::string out = "S={";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  out += "}";
  return out;
}

// Bit j (coordinate j, 0-based) of universe element c under the
// lexicographic bit-vector enumeration: coordinate 0 is the most
// significant bit, so c = 0 is the all-zeros (or all +1) element.
inline int universe_bit(long c, int j, int d) { return (c >> (d - 1 - j)) & 1; }

}  // namespace detail

// Prefix queries: W[t, x] = 1 iff x <= t (1-based), a T x T lower
// triangular all-ones matrix.
inline Workload thresholds(int t) {
  require(t >= 1, ErrorCode::kDimensionMismatch, "thresholds needs T >= 1");
  require(t <= kMaxUniverse, ErrorCode::kDimensionTooLarge, "universe cap");
  Workload out;
  out.name = "thresholds(" + std::to_string(t) + ")";
  out.w = Matrix(t, t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j <= i; ++j) out.w(i, j) = 1.0;
    out.query_labels.push_back("t=" + std::to_string(i + 1));
    out.universe_labels.push_back("x=" + std::to_string(i + 1));
  }
  return out;
}

// Parity queries over {-1,+1}^d: one row per subset S with |S| <= w
// (including the empty set), entries prod_{j in S} x_j. Universe columns
// enumerate bit-vectors lexicographically with x = all +1 first.
inline Workload parities(int d, int w) {
  require(d >= 1 && w >= 0 && w <= d, ErrorCode::kDimensionMismatch,
          "parities parameters");
  require((1L << d) <= kMaxUniverse, ErrorCode::kDimensionTooLarge,
          "universe cap");
  const long n = 1L << d;
  std::vector<std::vector<int>> subsets = detail::subsets_up_to(d, w);
  Workload out;
  out.name = "parities(" + std::to_string(d) + "," + std::to_string(w) + ")";
  out.w = Matrix(static_cast<int>(subsets.size()), static_cast<int>(n));
  for (size_t r = 0; r < subsets.size(); ++r) {
    out.query_labels.push_back(detail::subset_label(subsets[r]));
    for (long c = 0; c < n; ++c) {
      double v = 1.0;
      for (int j : subsets[r])
        v *= detail::universe_bit(c, j, d) ? -1.0 : 1.0;
      out.w(static_cast<int>(r), static_cast<int>(c)) = v;
    }
  }
  for (long c = 0; c < n; ++c) {
    std::string lbl = "x=";
    for (int j = 0; j < d; ++j)
      lbl += detail::universe_bit(c, j, d) ? '-' : '+';
    out.universe_labels.push_back(lbl);
  }
  return out;
}

// Marginal queries over {0,1}^d: for each subset S with |S| <= w and each
// assignment y over S, the indicator prod_{j in S} 1[x_j = y_j]. The empty
// subset contributes the all-ones row.
inline Workload marginals(int d, int w) {
  require(d >= 1 && w >= 0 && w <= d, ErrorCode::kDimensionMismatch,
          "marginals parameters");
  require((1L << d) <= kMaxUniverse, ErrorCode::kDimensionTooLarge,
          "universe cap");
  const long n = 1L << d;
  std::vector<std::vector<int>> subsets = detail::subsets_up_to(d, w);
  std::vector<std::pair<std::vector<int>, long>> rows;
  for (const auto& s : subsets) {
    const long assignments = 1L << s.size();
    for (long y = 0; y < assignments; ++y) rows.emplace_back(s, y);
  }
  Workload out;
  out.name = "marginals(" + std::to_string(d) + "," + std::to_string(w) + ")";
  out.w = Matrix(static_cast<int>(rows.size()), static_cast<int>(n));
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& [s, y] = rows[r];
    std::string lbl = detail::subset_label(s);
    if (!s.empty()) {
      lbl += ",y=";
      for (size_t i = 0; i < s.size(); ++i)
        lbl += detail::universe_bit(y, static_cast<int>(i),
                                    static_cast<int>(s.size()))
                   ? '1'
                   : '0';
    }
    out.query_labels.push_back(lbl);
    for (long c = 0; c < n; ++c) {
      double v = 1.0;
      for (size_t i = 0; i < s.size(); ++i) {
        const int want = detail::universe_bit(y, static_cast<int>(i),
                                              static_cast<int>(s.size()));
        if (detail::universe_bit(c, s[i], d) != want) {
          v = 0.0;
          break;
        }
      }
      out.w(static_cast<int>(r), static_cast<int>(c)) = v;
    }
  }
  for (long c = 0; c < n; ++c) {
    std::string lbl = "x=";
    for (int j = 0; j < d; ++j)
      lbl += detail::universe_bit(c, j, d) ? '1' : '0';
    out.universe_labels.push_back(lbl);
  }
  return out;
}

// Seed-determined dense sign matrix.
inline Workload random_sign(int k, int n, uint64_t seed) {
  require(k >= 1 && n >= 1, ErrorCode::kDimensionMismatch,
          "random_sign dimensions");
  require(n <= kMaxUniverse, ErrorCode::kDimensionTooLarge, "universe cap");
  Workload out;
  out.name = "random_sign(" + std::to_string(k) + "," + std::to_string(n) +
             "," + std::to_string(seed) + ")";
  out.w = Matrix(k, n);
  Rng rng(substream(seed, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) out.w(i, j) = rng.bernoulli(0.5) ? 1.0 : -1.0;
  for (int i = 0; i < k; ++i) out.query_labels.push_back("q=" + std::to_string(i + 1));
  for (int j = 0; j < n; ++j) out.universe_labels.push_back("x=" + std::to_string(j + 1));
  return out;
}

// Doubles the universe with negated elements: W_sym = [W, -W] and
// pairing j <-> j + N. Queries become odd functions of the signed universe.
inline Workload symmetrize(const Workload& in) {
  require(!in.symmetric, ErrorCode::kAlreadySymmetric,
          "workload is already in symmetric form");
  const int k = in.w.rows();
  const int n = in.w.cols();
  Workload out;
  out.name = "sym(" + in.name + ")";
  out.symmetric = true;
  out.w = Matrix(k, 2 * n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) {
      out.w(i, j) = in.w(i, j);
      out.w(i, j + n) = -in.w(i, j);
    }
  out.query_labels = in.query_labels;
  out.pairing.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    out.pairing[j] = j + n;
    out.pairing[j + n] = j;
    out.universe_labels.push_back("+" + in.universe_labels[j]);
  }
  for (int j = 0; j < n; ++j)
    out.universe_labels.push_back("-" + in.universe_labels[j]);
  return out;
}

// The dyadic-interval factorization of thresholds(T): A stacks indicator
// rows of the dyadic intervals (by level: lengths 1, 2, ..., T), R picks
// the greedy dyadic decomposition of each prefix [1, t]. All entries are
// 0/1 and R A = thresholds(T) holds exactly in integer arithmetic.
inline Factorization binary_tree_factorization(int t) {
  require(t >= 1 && (t & (t - 1)) == 0, ErrorCode::kNotPowerOfTwo,
          "binary tree needs a power-of-two domain");
  require(t <= kMaxUniverse, ErrorCode::kDimensionTooLarge, "universe cap");
  struct Interval {
    int start;  // 1-based inclusive
    int len;
  };
  std::vector<Interval> intervals;
  for (int len = 1; len <= t; len *= 2)
    for (int start = 1; start + len - 1 <= t; start += len)
      intervals.push_back({start, len});
  const int rows = static_cast<int>(intervals.size());  // 2T - 1
  Factorization f;
  f.kind = FactorKind::kInf;
  f.a = Matrix(rows, t);
  for (int r = 0; r < rows; ++r)
    for (int x = intervals[r].start; x < intervals[r].start + intervals[r].len;
         ++x)
      f.a(r, x - 1) = 1.0;
  // Index of an aligned interval (start, len) in the level-major order.
  const auto interval_index = [&](int start, int len) {
    int base = 0;
    for (int l = 1; l < len; l *= 2) base += t / l;
    return base + (start - 1) / len;
  };
  f.r = Matrix(t, rows);
  for (int q = 1; q <= t; ++q) {
    int pos = 1;
    int remaining = q;
    while (remaining > 0) {
      int len = 1;
      // Largest aligned dyadic block starting at pos that fits.
      while (len * 2 <= remaining && (pos - 1) % (len * 2) == 0) len *= 2;
      f.r(q - 1, interval_index(pos, len)) = 1.0;
      pos += len;
      remaining -= len;
    }
  }
  f.w_tilde = f.r * f.a;
  f.approx_tolerance = 0.0;
  f.value = factorization_value(f.r, f.a, f.kind);
  return f;
}

// A finite class of sign-valued concepts over a base universe.
struct ConceptClass {
  Matrix d;  // concepts x base universe, entries in {-1, +1}
  std::vector<std::string> concept_labels;
  std::vector<std::string> universe_labels;
};

// Concept evaluations as a symmetric workload: q_c(x) = c(x) on the
// positive half and -c(-x) on the negated half.
inline Workload concept_workload(const ConceptClass& c) {
  const int k = c.d.rows();
  const int n = c.d.cols();
  require(k >= 1 && n >= 1, ErrorCode::kDimensionMismatch,
          "empty concept class");
  Workload base;
  base.name = "concepts(" + std::to_string(k) + ")";
  base.w = c.d;
  base.query_labels = c.concept_labels.empty()
                          ? std::vector<std::string>()
                          : c.concept_labels;
  if (base.query_labels.empty())
    for (int i = 0; i < k; ++i)
      base.query_labels.push_back("c=" + std::to_string(i + 1));
  if (c.universe_labels.empty())
    for (int j = 0; j < n; ++j)
      base.universe_labels.push_back("x=" + std::to_string(j + 1));
  else
    base.universe_labels = c.universe_labels;
  return symmetrize(base);
}

}  // namespace privfact

#endif  // PRIVFACT_WORKLOADS_HPP_
