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

#ifndef PRIVFACT_NORMS_HPP_
#define PRIVFACT_NORMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "privfact/errors.hpp"
#include "privfact/matrix.hpp"

namespace privfact {

// Brute-force sign enumeration caps out here; 2^24 evaluations is the desk
// limit.
inline constexpr int kMaxEnumerationColumns = 24;

namespace detail {

// Calls fn(v) for v = M z over every z in {±1}^cols. Walks a binary
// reflected Gray code so each step updates v by a single column flip.
template <typename Fn>
void for_each_sign_image(const Matrix& m, Fn&& fn) {
  const int n = m.cols();
  require(n >= 1, ErrorCode::kDimensionMismatch, "enumeration needs columns");
  require(n <= kMaxEnumerationColumns, ErrorCode::kDimensionTooLarge,
          "sign enumeration capped at 24 columns");
  const int rows = m.rows();
  std::vector<double> v(rows, 0.0);
  std::vector<double> sign(n, 1.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < n; ++j) v[i] += m(i, j);
  fn(v);
  const uint64_t steps = (1ull << n) - 1;
  for (uint64_t t = 1; t <= steps; ++t) {
    uint64_t x = t;
    int j = 0;
    while ((x & 1ull) == 0ull) {
      x >>= 1;
      ++j;
    }
    const double delta = -2.0 * sign[j];
    sign[j] = -sign[j];
    for (int i = 0; i < rows; ++i) v[i] += delta * m(i, j);
    fn(v);
  }
}

}  // namespace detail

// ||M||_{inf->1} = max over z in {±1}^cols of sum_i |(Mz)_i|.
inline double norm_inf_to_one(const Matrix& m) {
  double best = 0.0;
  detail::for_each_sign_image(m, [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    best = std::max(best, s);
  });
  return best;
}

// ||M||_{inf->2} = max over z in {±1}^cols of ||Mz||_2 (unweighted).
inline double norm_inf_to_two(const Matrix& m) {
  double best = 0.0;
  detail::for_each_sign_image(m, [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    best = std::max(best, s);
  });
  return std::sqrt(best);
}

// ||M||_{inf->L2(pi)} = max over z in {±1}^cols of sqrt(sum_i pi_i (Mz)_i²).
inline double norm_inf_to_two(const Matrix& m, const std::vector<double>& pi) {
  require(static_cast<int>(pi.size()) == m.rows(),
          ErrorCode::kDimensionMismatch, "weight vector length");
  check_distribution(pi, 1e-9, "norm weight");
  double best = 0.0;
  detail::for_each_sign_image(m, [&](const std::vector<double>& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += pi[i] * v[i] * v[i];
    best = std::max(best, s);
  });
  return std::sqrt(best);
}

// Same weighted norm for a column-paired matrix whose rows are antisymmetric
// across the pairing (M[i, pair[j]] = -M[i, j]). Writing g_j = z_j - z_{j'}
// in {-2, 0, 2}, the objective is convex in g over the box [-2, 2], so the
// maximum sits at a vertex: the norm equals exactly twice the norm of the
// positive-half columns. This cuts the enumeration from 2^N to 2^(N/2).
inline double norm_inf_to_two_paired(const Matrix& m,
                                     const std::vector<double>& pi,
                                     const std::vector<int>& pairing) {
  require(static_cast<int>(pairing.size()) == m.cols(),
          ErrorCode::kDimensionMismatch, "pairing length");
  std::vector<int> half;
  for (int j = 0; j < m.cols(); ++j) {
    const int jp = pairing[j];
    require(jp >= 0 && jp < m.cols() && pairing[jp] == j && jp != j,
            ErrorCode::kNotSymmetric, "pairing is not an involution");
    if (j < jp) half.push_back(j);
    for (int i = 0; i < m.rows(); ++i)
      require(std::fabs(m(i, j) + m(i, jp)) <= 1e-12,
              ErrorCode::kAsymmetricWitness,
              "rows are not antisymmetric across the pairing");
  }
  Matrix mp(m.rows(), static_cast<int>(half.size()));
  for (int i = 0; i < m.rows(); ++i)
    for (size_t c = 0; c < half.size(); ++c) mp(i, static_cast<int>(c)) = m(i, half[c]);
  return 2.0 * norm_inf_to_two(mp, pi);
}

}  // namespace privfact

#endif  // PRIVFACT_NORMS_HPP_
