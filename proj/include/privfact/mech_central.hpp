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

#ifndef PRIVFACT_MECH_CENTRAL_HPP_
#define PRIVFACT_MECH_CENTRAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "privfact/eigen.hpp"
#include "privfact/errors.hpp"
#include "privfact/gamma2.hpp"
#include "privfact/matrix.hpp"
#include "privfact/rng.hpp"
#include "privfact/workloads.hpp"

namespace privfact {

// Classic Gaussian calibration: noise stddev = c * (l2 sensitivity).
inline double calibrate_gaussian(const PrivacyParams& p) {
  require(p.epsilon > 0.0, ErrorCode::kEpsilonNonpositive,
          "gaussian calibration needs epsilon > 0");
  require(p.delta > 0.0, ErrorCode::kDeltaZero,
          "gaussian calibration needs delta > 0");
  return std::sqrt(2.0 * std::log(1.25 / p.delta)) / p.epsilon;
}

// Covariance of the answer noise R*g at dataset size n, where g is isotropic
// with per-coordinate stddev c*||A||_{1->2}/n.
struct NoiseCovariance {
  Matrix sigma_matrix;
  std::string note;
};

inline NoiseCovariance noise_covariance(const Factorization& f,
                                        const PrivacyParams& p, long n) {
  require(n >= 1, ErrorCode::kEmptyDataset, "covariance needs n >= 1");
  const double c = calibrate_gaussian(p);
  const double a = norm_one_to_two(f.a);
  const double scale = (c * a / static_cast<double>(n)) *
                       (c * a / static_cast<double>(n));
  Matrix rrt = f.r * f.r.transpose();
  NoiseCovariance out;
  out.sigma_matrix = Matrix(rrt.rows(), rrt.cols());
  for (int i = 0; i < rrt.rows(); ++i)
    for (int j = 0; j < rrt.cols(); ++j)
      out.sigma_matrix(i, j) = scale * 0.5 * (rrt(i, j) + rrt(j, i));
  require(min_eigenvalue(out.sigma_matrix) >= -1e-8, ErrorCode::kSolverFailed,
          "noise covariance lost positive semidefiniteness");
  out.note = "c^2 * ||A||_{1->2}^2 / n^2 * R R^T (gaussian factorization)";
  return out;
}

// One mechanism invocation: (1/n) W~ h + R g with g fresh per seed. The
// noiseless flag is a debug path (c forced to 0) for bias measurement.
inline std::vector<double> run_factorization_mechanism(
    const Factorization& f, const Histogram& h, const PrivacyParams& p,
    uint64_t seed, bool noiseless = false) {
  require(static_cast<int>(h.counts.size()) == f.a.cols(),
          ErrorCode::kDimensionMismatch, "histogram length");
  require(f.r.cols() == f.a.rows(), ErrorCode::kDimensionMismatch,
          "factorization inner dimension");
  const double c = calibrate_gaussian(p);
  const long n = h.total();
  std::vector<double> out = answers(f.w_tilde, h);
  if (noiseless) return out;
  const double sigma = c * norm_one_to_two(f.a) / static_cast<double>(n);
  Rng rng(substream(seed, 0));
  const int u = f.a.rows();
  std::vector<double> g(u);
  for (int j = 0; j < u; ++j) g[j] = sigma * rng.gaussian();
  for (int i = 0; i < f.r.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < u; ++j) s += f.r(i, j) * g[j];
    out[i] += s;
  }
  return out;
}

// Worst-case error estimate over a fixed histogram family: all point masses
// n*e_x plus 16 seeded random histograms. Aggregates are per-histogram trial
// means, maximized over histograms; the per-trial series kept in the report
// are those of each metric's argmax histogram.
struct MechanismReport {
  std::string workload_id;
  long n = 0;
  PrivacyParams privacy;
  int trials = 0;
  uint64_t seed = 0;
  int histograms = 0;
  std::vector<double> linf_series;  // per-trial, argmax-linf histogram
  std::vector<double> l22_series;   // per-trial mean squared error, argmax
  double mean_linf = 0.0;
  double se_linf = 0.0;
  double mean_l22 = 0.0;
  double se_l22 = 0.0;
  double root_mean_l22 = 0.0;
  int argmax_linf_histogram = -1;
  int argmax_l22_histogram = -1;
};

namespace detail {

inline double series_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double series_stderr(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1)) /
         std::sqrt(static_cast<double>(v.size()));
}

inline std::vector<Histogram> error_histograms(int universe, long n,
                                               uint64_t seed) {
  std::vector<Histogram> hs;
  for (int x = 0; x < universe; ++x) {
    Histogram h;
    h.counts.assign(universe, 0);
    h.counts[x] = n;
    hs.push_back(std::move(h));
  }
  for (int r = 0; r < 16; ++r) {
    Rng rng(substream(seed, 1000 + r));
    Histogram h;
    h.counts.assign(universe, 0);
    for (long i = 0; i < n; ++i) ++h.counts[rng.uniform_index(universe)];
    hs.push_back(std::move(h));
  }
  return hs;
}

}  // namespace detail

// mech(histogram, seed) must return the k query answers. Trials share a
// counter-derived seed across histograms, so trial t sees the same noise
// stream on every histogram; trials stay independent of each other.
template <typename Mech>
MechanismReport measure_error(Mech&& mech, const Workload& w, long n,
                              const PrivacyParams& p, int trials,
                              uint64_t seed) {
  require(trials >= 1, ErrorCode::kDimensionMismatch, "trials >= 1");
  require(n >= 1, ErrorCode::kEmptyDataset, "n >= 1");
  const int k = w.w.rows();
  const std::vector<Histogram> hs =
      detail::error_histograms(w.w.cols(), n, seed);
  const int hn = static_cast<int>(hs.size());
  std::vector<std::vector<double>> linf(hn, std::vector<double>(trials));
  std::vector<std::vector<double>> l22(hn, std::vector<double>(trials));
  for (int hi = 0; hi < hn; ++hi) {
    const std::vector<double> truth = answers(w.w, hs[hi]);
    for (int t = 0; t < trials; ++t) {
      const std::vector<double> got = mech(hs[hi], substream(seed, t));
      require(static_cast<int>(got.size()) == k, ErrorCode::kDimensionMismatch,
              "mechanism answer length");
      double worst = 0.0;
      double sq = 0.0;
      for (int i = 0; i < k; ++i) {
        const double e = std::fabs(got[i] - truth[i]);
        worst = std::max(worst, e);
        sq += e * e;
      }
      linf[hi][t] = worst;
      l22[hi][t] = sq / static_cast<double>(k);
    }
  }
  MechanismReport rep;
  rep.workload_id = w.name;
  rep.n = n;
  rep.privacy = p;
  rep.trials = trials;
  rep.seed = seed;
  rep.histograms = hn;
  for (int hi = 0; hi < hn; ++hi) {
    const double ml = detail::series_mean(linf[hi]);
    const double m2 = detail::series_mean(l22[hi]);
    if (rep.argmax_linf_histogram < 0 || ml > rep.mean_linf) {
      rep.mean_linf = ml;
      rep.argmax_linf_histogram = hi;
    }
    if (rep.argmax_l22_histogram < 0 || m2 > rep.mean_l22) {
      rep.mean_l22 = m2;
      rep.argmax_l22_histogram = hi;
    }
  }
  rep.linf_series = linf[rep.argmax_linf_histogram];
  rep.l22_series = l22[rep.argmax_l22_histogram];
  rep.se_linf = detail::series_stderr(rep.linf_series, rep.mean_linf);
  rep.se_l22 = detail::series_stderr(rep.l22_series, rep.mean_l22);
  rep.root_mean_l22 = std::sqrt(rep.mean_l22);
  return rep;
}

inline MechanismReport measure_error_central(const Factorization& f,
                                             const Workload& w, long n,
                                             const PrivacyParams& p,
                                             int trials, uint64_t seed,
                                             bool noiseless = false) {
  return measure_error(
      [&](const Histogram& h, uint64_t s) {
        return run_factorization_mechanism(f, h, p, s, noiseless);
      },
      w, n, p, trials, seed);
}

// Data-independent analysis: any mechanism adding noise with covariance
// sigma to the exact answers yields, through the whitened factorization
// A = Sigma^{-1/2} W, R = Sigma^{1/2}, a certified Frobenius factorization
// bound and an expected mean-squared error sqrt(Tr Sigma)/(n sqrt(k)).
struct DataIndependentReport {
  double s_star = 0.0;          // max_x w_x^T Sigma^{-1} w_x
  Matrix r;                     // Sigma^{1/2}
  Matrix a;                     // Sigma^{-1/2} W
  double gamma2_f_value = 0.0;  // SDP value of the Frobenius relaxation
  double certified_product = 0.0;
  double err_l2 = 0.0;
};

inline DataIndependentReport analyze_data_independent(
    const NoiseCovariance& cov, const Workload& w, const PrivacyParams& p,
    long n) {
  (void)p;
  const Matrix& sigma = cov.sigma_matrix;
  require(sigma.rows() == sigma.cols() && sigma.rows() == w.w.rows(),
          ErrorCode::kDimensionMismatch, "covariance side");
  require(n >= 1, ErrorCode::kEmptyDataset, "n >= 1");
  require(min_eigenvalue(sigma) > 1e-8, ErrorCode::kFullDimensionalityViolated,
          "noise covariance is not full dimensional");
  const int k = w.w.rows();
  EigenDecomposition eig = eigen_sym(sigma);
  Matrix inv_sqrt(k, k);
  Matrix sqrt_m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double si = 0.0;
      double ii = 0.0;
      for (int m = 0; m < k; ++m) {
        const double root = std::sqrt(eig.values[m]);
        si += eig.vectors(i, m) * root * eig.vectors(j, m);
        ii += eig.vectors(i, m) * (1.0 / root) * eig.vectors(j, m);
      }
      sqrt_m(i, j) = si;
      inv_sqrt(i, j) = ii;
    }
  DataIndependentReport rep;
  rep.r = sqrt_m;
  rep.a = inv_sqrt * w.w;
  const double a_norm = norm_one_to_two(rep.a);
  rep.s_star = a_norm * a_norm;
  const double r_frob = frobenius_norm(rep.r);
  require(std::fabs(r_frob - std::sqrt(trace(sigma))) <= 1e-8,
          ErrorCode::kSolverFailed, "||R||_F must equal sqrt(Tr Sigma)");
  rep.certified_product = a_norm * r_frob / std::sqrt(static_cast<double>(k));
  rep.err_l2 = std::sqrt(trace(sigma)) /
               (static_cast<double>(n) * std::sqrt(static_cast<double>(k)));
  rep.gamma2_f_value = gamma2_frobenius(w.w).value;
  return rep;
}

// Privacy check for Gaussian noise with covariance sigma added to the
// normalized answers W h / n. Under add/remove adjacency one user shifts the
// answers by w_x / n, so the whitened sensitivity is max_x ||sigma^{+/2}
// w_x|| / n; Gaussian privacy needs it at most eps / sqrt(2 ln(1.25/delta)).
// Columns outside range(sigma) have unbounded whitened norm and fail.
struct PrivacyCertificate {
  double sensitivity = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool passed = false;
};

inline PrivacyCertificate certify_gaussian_privacy(const NoiseCovariance& cov,
                                                   const Workload& w,
                                                   const PrivacyParams& p,
                                                   long n) {
  const Matrix& sigma = cov.sigma_matrix;
  require(sigma.rows() == sigma.cols() && sigma.rows() == w.w.rows(),
          ErrorCode::kDimensionMismatch, "covariance side");
  require(n >= 1, ErrorCode::kEmptyDataset, "n >= 1");
  const double c = calibrate_gaussian(p);
  PrivacyCertificate out;
  out.threshold = 1.0 / c;
  const int k = w.w.rows();
  EigenDecomposition eig = eigen_sym(sigma);
  double top = 0.0;
  for (double v : eig.values) top = std::max(top, std::fabs(v));
  const double cutoff = top * 1e-10;
  bool in_range = true;
  std::vector<double> coef(k);
  for (int x = 0; x < w.w.cols(); ++x) {
    double col_norm_sq = 0.0;
    for (int i = 0; i < k; ++i) col_norm_sq += w.w(i, x) * w.w(i, x);
    for (int m = 0; m < k; ++m) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += eig.vectors(i, m) * w.w(i, x);
      coef[m] = s;
    }
    double wnorm_sq = 0.0;  // whitened squared norm over range(sigma)
    double resid_sq = 0.0;  // mass outside range(sigma)
    for (int m = 0; m < k; ++m) {
      if (eig.values[m] > cutoff)
        wnorm_sq += coef[m] * coef[m] / eig.values[m];
      else
        resid_sq += coef[m] * coef[m];
    }
    if (std::sqrt(resid_sq) > 1e-8 * std::max(1.0, std::sqrt(col_norm_sq)))
      in_range = false;
    out.sensitivity = std::max(out.sensitivity,
                               std::sqrt(wnorm_sq) / static_cast<double>(n));
  }
  out.margin = out.threshold - out.sensitivity;
  out.passed = in_range && out.sensitivity <= out.threshold * (1.0 + 1e-9);
  return out;
}

}  // namespace privfact

#endif  // PRIVFACT_MECH_CENTRAL_HPP_
