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

#ifndef PRIVFACT_MECH_LOCAL_HPP_
#define PRIVFACT_MECH_LOCAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "privfact/errors.hpp"
#include "privfact/gamma2.hpp"
#include "privfact/matrix.hpp"
#include "privfact/rng.hpp"
#include "privfact/workloads.hpp"

namespace privfact {

// c_d = E|<z, v>| for z uniform on the unit sphere in R^d: the unbiasedness
// constant of the randomizer. Closed form Gamma(d/2) / (sqrt(pi) *
// Gamma((d+1)/2)); the d = 1 sphere is {-1, +1} so c_1 = 1 exactly.
inline double calibration_constant(int d) {
  require(d >= 1, ErrorCode::kDimensionMismatch, "dimension >= 1");
  if (d == 1) return 1.0;
  return std::exp(std::lgamma(d / 2.0) - std::lgamma((d + 1) / 2.0)) /
         std::sqrt(M_PI);
}

// Output magnitude of the unit-vector randomizer.
inline double randomizer_magnitude(int d, double epsilon) {
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  const double e = std::exp(epsilon);
  return (e + 1.0) / ((e - 1.0) * calibration_constant(d));
}

// Unnormalized density levels of the hemisphere stage: the hemisphere agreeing
// with the rounded direction carries weight e^eps, the other weight 1, so the
// worst-case density ratio between inputs is e^eps by construction.
struct DensityLevels {
  double high;
  double low;
};

inline DensityLevels randomizer_density_levels(double epsilon) {
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  return {std::exp(epsilon), 1.0};
}

// Pure eps-DP unit-vector randomizer: norm rounding to the sphere, then a
// biased hemisphere flip, scaled so the output is unbiased with constant
// magnitude m(d, eps). E[output] = x; ||output|| = m always.
inline std::vector<double> privatize_unit_vector(const std::vector<double>& x,
                                                 double epsilon,
                                                 uint64_t seed) {
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  const int d = static_cast<int>(x.size());
  require(d >= 1, ErrorCode::kDimensionMismatch, "empty input vector");
  double norm_sq = 0.0;
  for (double v : x) norm_sq += v * v;
  const double norm = std::sqrt(norm_sq);
  require(norm <= 1.0 + 1e-9, ErrorCode::kNormTooLarge,
          "input must lie in the unit ball");
  Rng rng(substream(seed, 0));
  // Stage 1: round to the sphere, preserving the mean.
  std::vector<double> xhat(d, 0.0);
  if (norm == 0.0) {
    xhat[0] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  } else {
    const double sign = rng.bernoulli((1.0 + norm) / 2.0) ? 1.0 : -1.0;
    for (int i = 0; i < d; ++i) xhat[i] = sign * x[i] / norm;
  }
  // Stage 2: biased hemisphere sample via reflection.
  const DensityLevels lv = randomizer_density_levels(epsilon);
  const bool aligned = rng.bernoulli(lv.high / (lv.high + lv.low));
  std::vector<double> z = rng.sphere(d);
  double dot = 0.0;
  for (int i = 0; i < d; ++i) dot += z[i] * xhat[i];
  const bool on_aligned_side = dot >= 0.0;
  if (on_aligned_side != aligned)
    for (double& v : z) v = -v;
  const double m = randomizer_magnitude(d, epsilon);
  for (double& v : z) v *= m;
  return z;
}

// Transcript and reconstruction of the non-interactive protocol.
struct LocalReport {
  std::vector<std::vector<double>> per_user;
  std::vector<double> aggregation_mean;
  std::vector<double> output;
  double epsilon = 0.0;
  uint64_t seed = 0;
  std::string factorization_id;
};

// Each user privatizes their factorized column A e_x; the server averages in
// index order and reconstructs with R. Bias is at most the factorization
// tolerance in l_inf; per-coordinate noise is subgaussian with scale m/sqrt(n).
inline LocalReport local_protocol(const Factorization& f,
                                  const std::vector<int>& dataset,
                                  double epsilon, uint64_t seed,
                                  bool noiseless = false,
                                  const std::string& id = "") {
  require(!dataset.empty(), ErrorCode::kEmptyDataset, "no users");
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  require(std::fabs(norm_one_to_two(f.a) - 1.0) <= 1e-6,
          ErrorCode::kNotNormalized,
          "local protocol needs ||A||_{1->2} = 1");
  const int u = f.a.rows();
  const int n = static_cast<int>(dataset.size());
  LocalReport rep;
  rep.epsilon = epsilon;
  rep.seed = seed;
  rep.factorization_id = id;
  rep.per_user.reserve(n);
  rep.aggregation_mean.assign(u, 0.0);
  for (int i = 0; i < n; ++i) {
    const int x = dataset[i];
    require(x >= 0 && x < f.a.cols(), ErrorCode::kDimensionMismatch,
            "universe element out of range");
    std::vector<double> col(u);
    double col_norm_sq = 0.0;
    for (int r = 0; r < u; ++r) {
      col[r] = f.a(r, x);
      col_norm_sq += col[r] * col[r];
    }
    // The 1e-6 normalization slack can leave columns a hair outside the unit
    // ball; rescale those to the sphere (bias absorbed by the tolerance).
    if (col_norm_sq > 1.0) {
      const double inv = 1.0 / std::sqrt(col_norm_sq);
      for (double& v : col) v *= inv;
    }
    std::vector<double> y =
        noiseless ? col : privatize_unit_vector(col, epsilon, substream(seed, i));
    for (int r = 0; r < u; ++r) rep.aggregation_mean[r] += y[r];
    rep.per_user.push_back(std::move(y));
  }
  for (int r = 0; r < u; ++r)
    rep.aggregation_mean[r] /= static_cast<double>(n);
  rep.output.assign(f.r.rows(), 0.0);
  for (int i = 0; i < f.r.rows(); ++i) {
    double s = 0.0;
    for (int r = 0; r < u; ++r) s += f.r(i, r) * rep.aggregation_mean[r];
    rep.output[i] = s;
  }
  return rep;
}

// Randomized response: flip each bit with probability 1/(1+e^eps), then
// debias the mean by (mean - q)/(p - q) with p = e^eps/(1+e^eps). The
// noiseless path returns the raw mean (the eps -> infinity limit).
inline double randomized_response_fraction(const std::vector<int>& bits,
                                           double epsilon, uint64_t seed,
                                           bool noiseless = false) {
  require(!bits.empty(), ErrorCode::kEmptyDataset, "no bits");
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  const double e = std::exp(epsilon);
  const double p = e / (1.0 + e);
  const double q = 1.0 - p;
  double mean = 0.0;
  for (size_t i = 0; i < bits.size(); ++i) {
    int b = bits[i] ? 1 : 0;
    if (!noiseless) {
      Rng rng(substream(seed, i));
      if (rng.bernoulli(q)) b = 1 - b;
    }
    mean += b;
  }
  mean /= static_cast<double>(bits.size());
  if (noiseless) return mean;
  return (mean - q) / (p - q);
}

// Splits a symmetric-workload query over a signed universe into two
// anchored sub-datasets plus a randomized-response count, each eps-private
// (3 eps total). Noiselessly the combination reproduces Q(X) exactly:
// Q(X) = Q(Y+) + Q(Y-) + (2 n_+/n - 1) Q(x0).
struct ReduceReport {
  std::vector<double> output;
  std::vector<double> q_plus;
  std::vector<double> q_minus;
  double fraction_estimate = 0.0;
};

inline ReduceReport reduce_asymmetric(const Workload& w,
                                      const Factorization& f,
                                      const std::vector<int>& dataset,
                                      int anchor, double epsilon,
                                      uint64_t seed, bool noiseless = false) {
  require(w.symmetric && !w.pairing.empty(), ErrorCode::kNotSymmetric,
          "reduction needs a symmetric workload");
  require(!dataset.empty(), ErrorCode::kEmptyDataset, "no users");
  const int cols = w.w.cols();
  require(anchor >= 0 && anchor < cols && anchor < w.pairing[anchor],
          ErrorCode::kAnchorInvalid,
          "anchor must lie in the positive half");
  const int neg_anchor = w.pairing[anchor];
  const int n = static_cast<int>(dataset.size());
  std::vector<int> y_plus(n), y_minus(n), bits(n);
  for (int i = 0; i < n; ++i) {
    const int x = dataset[i];
    require(x >= 0 && x < cols, ErrorCode::kDimensionMismatch,
            "universe element out of range");
    const bool positive = x < w.pairing[x];
    bits[i] = positive ? 1 : 0;
    y_plus[i] = positive ? x : anchor;
    y_minus[i] = positive ? neg_anchor : x;
  }
  ReduceReport rep;
  rep.q_plus = local_protocol(f, y_plus, epsilon, substream(seed, 1),
                              noiseless).output;
  rep.q_minus = local_protocol(f, y_minus, epsilon, substream(seed, 2),
                               noiseless).output;
  rep.fraction_estimate = randomized_response_fraction(
      bits, epsilon, substream(seed, 3), noiseless);
  const double corr = 2.0 * rep.fraction_estimate - 1.0;
  rep.output.resize(w.w.rows());
  for (int i = 0; i < w.w.rows(); ++i)
    rep.output[i] = rep.q_plus[i] + rep.q_minus[i] + corr * w.w(i, anchor);
  return rep;
}

// One labeled example: a positive-universe element and a sign label.
struct LabeledExample {
  int x = 0;
  int label = 1;  // +1 or -1
};

struct LearnResult {
  int best = -1;
  double best_loss = 0.0;
  std::vector<double> losses;
  double gamma2_value = 0.0;
};

// Sample size sufficient for the factorization learner at excess loss alpha:
// n = ceil(C1 * max(gamma2(D, alpha/2)^2 * ln(2k), ln(2k)) / (eps^2 alpha^2))
// with the eps^2 absorbed only into the first term (the second is the
// non-private statistical rate).
struct SampleSizeBound {
  long n = 0;
  double gamma2_value = 0.0;
};

inline SampleSizeBound agnostic_sample_size(const ConceptClass& c,
                                            double alpha, double epsilon) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::kDimensionMismatch,
          "alpha in (0,1)");
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  Workload w = concept_workload(c);
  const double g = gamma2_approx(w.w, alpha / 2.0).value;
  const double k = static_cast<double>(w.w.rows());
  const double log_term = std::log(2.0 * k);
  const double c1 = 16.0;
  const double private_rate =
      c1 * g * g * log_term / (epsilon * epsilon * alpha * alpha);
  const double stat_rate = c1 * log_term / (alpha * alpha);
  SampleSizeBound out;
  out.gamma2_value = g;
  out.n = static_cast<long>(std::ceil(std::max(private_rate, stat_rate)));
  return out;
}

// Maps (x, y) to the signed element y*x, estimates every concept's
// correlation privately in one shot, and returns the argmin of the losses
// 1/2 - q_hat/2.
inline LearnResult agnostic_learn(const ConceptClass& c,
                                  const std::vector<LabeledExample>& examples,
                                  double epsilon, double t, uint64_t seed,
                                  bool noiseless = false) {
  require(!examples.empty(), ErrorCode::kEmptyDataset, "no examples");
  Workload w = concept_workload(c);
  const int half = w.w.cols() / 2;
  Factorization f =
      t > 0.0 ? gamma2_approx(w.w, t) : gamma2(w.w);
  std::vector<int> mapped(examples.size());
  for (size_t i = 0; i < examples.size(); ++i) {
    require(examples[i].x >= 0 && examples[i].x < half,
            ErrorCode::kDimensionMismatch, "example element out of range");
    require(examples[i].label == 1 || examples[i].label == -1,
            ErrorCode::kDimensionMismatch, "labels are +1/-1");
    mapped[i] = examples[i].label == 1 ? examples[i].x : examples[i].x + half;
  }
  LocalReport rep =
      local_protocol(f, mapped, epsilon, seed, noiseless, w.name);
  LearnResult out;
  out.gamma2_value = f.value;
  out.losses.resize(rep.output.size());
  for (size_t i = 0; i < rep.output.size(); ++i) {
    out.losses[i] = 0.5 - rep.output[i] / 2.0;
    if (out.best < 0 || out.losses[i] < out.best_loss) {
      out.best = static_cast<int>(i);
      out.best_loss = out.losses[i];
    }
  }
  return out;
}

}  // namespace privfact

#endif  // PRIVFACT_MECH_LOCAL_HPP_
