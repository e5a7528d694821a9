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

#ifndef PRIVFACT_LOWER_BOUNDS_HPP_
#define PRIVFACT_LOWER_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "privfact/errors.hpp"
#include "privfact/gamma2.hpp"
#include "privfact/matrix.hpp"
#include "privfact/norms.hpp"
#include "privfact/sdp.hpp"
#include "privfact/workloads.hpp"

namespace privfact {

// Pinsker target: distinguishing advantage 1/3, so the KL divergence between
// transcript distributions must reach 2 * (1/3)^2.
inline constexpr double kKlTarget = 2.0 / 9.0;

// Per-query distribution pair extracted from a dual witness over a signed
// universe. A_v is even (same mass on x and -x), B_v pushes the mass to the
// signed side of the witness, so pi(v) * (A_v - B_v) = -u_v entrywise.
struct BaseDistributions {
  std::vector<double> pi;
  Matrix a_dists;  // rows indexed by query, columns by signed universe
  Matrix b_dists;
  std::vector<bool> active;  // pi(v) > 0
};

// Answers of all queries under a distribution over the universe.
inline std::vector<double> distribution_answers(const Matrix& w,
                                                const std::vector<double>& p) {
  require(static_cast<int>(p.size()) == w.cols(),
          ErrorCode::kDimensionMismatch, "distribution length");
  std::vector<double> out(w.rows(), 0.0);
  for (int i = 0; i < w.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < w.cols(); ++j) s += w(i, j) * p[j];
    out[i] = s;
  }
  return out;
}

inline BaseDistributions base_distributions(const Workload& w,
                                            const Matrix& u) {
  require(w.symmetric && !w.pairing.empty(), ErrorCode::kNotSymmetric,
          "base distributions need a symmetric workload");
  require(u.rows() == w.w.rows() && u.cols() == w.w.cols(),
          ErrorCode::kDimensionMismatch, "witness shape");
  require(std::fabs(entry_sum_abs(u) - 1.0) <= 1e-12,
          ErrorCode::kNotNormalized, "witness must have ||U||_1 = 1");
  const int k = u.rows();
  const int cols = u.cols();
  for (int v = 0; v < k; ++v)
    for (int j = 0; j < cols; ++j)
      require(std::fabs(u(v, j) + u(v, w.pairing[j])) <= 1e-12,
              ErrorCode::kAsymmetricWitness,
              "witness rows must be antisymmetric across the pairing");
  BaseDistributions out;
  out.pi.assign(k, 0.0);
  out.a_dists = Matrix(k, cols);
  out.b_dists = Matrix(k, cols);
  out.active.assign(k, false);
  for (int v = 0; v < k; ++v) {
    double mass = 0.0;
    for (int j = 0; j < cols; ++j) mass += std::fabs(u(v, j));
    out.pi[v] = mass;
    if (mass == 0.0) {
      // Inactive placeholder: uniform on the universe (A = B, difference 0).
      for (int j = 0; j < cols; ++j) {
        out.a_dists(v, j) = 1.0 / cols;
        out.b_dists(v, j) = 1.0 / cols;
      }
      continue;
    }
    out.active[v] = true;
    for (int j = 0; j < cols; ++j) {
      if (j > w.pairing[j]) continue;  // handle each pair once
      const int jn = w.pairing[j];
      const double a_mass = std::fabs(u(v, j)) / mass;
      out.a_dists(v, j) = a_mass;
      out.a_dists(v, jn) = a_mass;
      const double b_mass = 2.0 * std::fabs(u(v, j)) / mass;
      if (u(v, j) >= 0.0) {
        out.b_dists(v, j) = b_mass;
        out.b_dists(v, jn) = 0.0;
      } else {
        out.b_dists(v, j) = 0.0;
        out.b_dists(v, jn) = b_mass;
      }
    }
  }
  return out;
}

// Exponential binning over values in (0, 1]: bins (2^{-l-1}, 2^{-l}] for
// l = 0..L, values <= beta excluded, best bin by pi-weighted mass.
struct BinResult {
  std::vector<int> s;
  int level = -1;
  double pi_mass = 0.0;
  double min_value = 0.0;
  int max_level = 0;  // guarantee denominator is 2 * max_level
};

inline BinResult exponential_binning(const std::vector<double>& a,
                                     const std::vector<double>& pi,
                                     double beta) {
  require(a.size() == pi.size(), ErrorCode::kDimensionMismatch,
          "value/weight lengths");
  require(beta > 0.0 && beta <= 1.0, ErrorCode::kInvalidDistribution,
          "beta in (0, 1]");
  double total = 0.0;
  for (size_t v = 0; v < a.size(); ++v) {
    require(a[v] <= 1.0 + 1e-12, ErrorCode::kInvalidDistribution,
            "values must lie below 1");
    total += pi[v] * a[v];
  }
  require(total > beta, ErrorCode::kNoInformativeBin,
          "weighted mass does not exceed beta");
  BinResult out;
  out.max_level = std::max(
      1, static_cast<int>(std::ceil(std::log2(1.0 / beta))) - 1);
  std::vector<std::vector<int>> bins(out.max_level + 1);
  for (size_t v = 0; v < a.size(); ++v) {
    if (a[v] <= beta) continue;  // includes all non-positive values
    const double av = std::min(a[v], 1.0);
    for (int l = 0; l <= out.max_level; ++l) {
      const double hi = std::ldexp(1.0, -l);
      if (av <= hi && av > hi / 2.0) {
        bins[l].push_back(static_cast<int>(v));
        break;
      }
    }
  }
  double best = -1.0;
  for (int l = 0; l <= out.max_level; ++l) {
    double mass = 0.0;
    for (int v : bins[l]) mass += pi[v] * a[v];
    if (mass > best) {
      best = mass;
      out.level = l;
    }
  }
  require(out.level >= 0 && !bins[out.level].empty(),
          ErrorCode::kNoInformativeBin, "no informative bin");
  out.s = bins[out.level];
  out.pi_mass = 0.0;
  out.min_value = 2.0;
  for (int v : out.s) {
    out.pi_mass += pi[v];
    out.min_value = std::min(out.min_value, a[v]);
  }
  // Guarantee with the explicit denominator 2 * max_level; holds on every
  // pipeline instance (the excluded mass is at most beta, the best bin takes
  // at least a proportional share, and min >= half the bin ceiling).
  require(out.pi_mass * out.min_value >=
              (total - beta) / (2.0 * out.max_level) - 1e-12,
          ErrorCode::kCertificateInvalid, "binning guarantee violated");
  return out;
}

namespace detail {

// min sum c_i^2 mu_i + sum nu_j over PSD [[diag(mu), M/2], [M^T/2, diag(nu)]].
// With replica counts c this is the scaling program of the row-replicated
// witness, collapsed so replicas never materialize. c = 1 recovers the
// gamma2_star program.
struct WeightedScaling {
  std::vector<double> mu;
  std::vector<double> nu;
  double value = 0.0;
};

inline WeightedScaling weighted_scaling_sdp(
    const Matrix& m, const std::vector<double>& c,
    const SdpOptions& opts = default_norm_options()) {
  const int k = m.rows();
  const int u = m.cols();
  const int dim = k + u;
  SdpProblem prob;
  prob.dim = dim;
  prob.objective = Matrix(dim, dim);
  for (int i = 0; i < k; ++i) prob.objective(i, i) = c[i] * c[i];
  for (int j = 0; j < u; ++j) prob.objective(k + j, k + j) = 1.0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const bool cross = i < k && j >= k;
      const double target = cross ? m(i, j - k) / 2.0 : 0.0;
      prob.equalities.push_back({entry_pin(dim, i, j), target});
    }
  SdpSolution sol = solve_sdp(prob, opts);
  check_solved(sol, "weighted scaling program");
  WeightedScaling out;
  out.mu.resize(k);
  out.nu.resize(u);
  for (int i = 0; i < k; ++i) out.mu[i] = std::max(0.0, sol.x(i, i));
  for (int j = 0; j < u; ++j) out.nu[j] = std::max(0.0, sol.x(k + j, k + j));
  out.value = sol.value;
  return out;
}

}  // namespace detail

// Rows whose scaling weight stays below the uniform threshold: S = {i :
// P_ii^2 <= 2/k}. At least half the rows survive, and projecting U onto S
// keeps sqrt(k/2) ||Pi_S U||_{inf->2} within gamma2*(U).
inline std::vector<int> row_select(const Matrix& u,
                                   const GammaStarResult& dec) {
  require(static_cast<int>(dec.scaling_p.size()) == u.rows(),
          ErrorCode::kDecompositionMissing,
          "row selection needs the gamma2* scaling");
  const int k = u.rows();
  std::vector<int> s;
  for (int i = 0; i < k; ++i)
    if (dec.scaling_p[i] * dec.scaling_p[i] <= 2.0 / k) s.push_back(i);
  require(2 * static_cast<int>(s.size()) >= k, ErrorCode::kCertificateInvalid,
          "selection must keep at least half the rows");
  if (u.cols() <= kMaxEnumerationColumns) {
    Matrix proj(static_cast<int>(s.size()), u.cols());
    for (size_t r = 0; r < s.size(); ++r)
      for (int j = 0; j < u.cols(); ++j) proj(static_cast<int>(r), j) = u(s[r], j);
    const double lhs =
        std::sqrt(k / 2.0) * norm_inf_to_two(proj);
    require(lhs <= dec.value + 1e-6, ErrorCode::kCertificateInvalid,
            "projected witness norm exceeds gamma2*");
  }
  return s;
}

// Replicates rows by 2^16-denominator rational weights, row-selects on the
// collapsed replica program, and renormalizes the surviving mass.
inline std::vector<double> reweight_pi(const Matrix& m, const Matrix& u,
                                       const std::vector<double>& pi,
                                       const std::vector<int>& pairing = {}) {
  require(m.rows() == u.rows() && m.cols() == u.cols() &&
              static_cast<int>(pi.size()) == m.rows(),
          ErrorCode::kDimensionMismatch, "reweight shapes");
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      require(std::fabs(u(i, j) - pi[i] * m(i, j)) <= 1e-9,
              ErrorCode::kDimensionMismatch, "witness must equal diag(pi) M");
  const double denom = 65536.0;
  const int k = m.rows();
  std::vector<double> c(k);
  std::vector<int> active;
  for (int i = 0; i < k; ++i) {
    c[i] = std::round(pi[i] * denom);
    if (c[i] > 0.0) active.push_back(i);
  }
  require(!active.empty(), ErrorCode::kCertificateInvalid,
          "all weights rounded to zero");
  Matrix m_active(static_cast<int>(active.size()), m.cols());
  std::vector<double> c_active(active.size());
  double c_max = 0.0;
  double replica_total = 0.0;
  for (size_t r = 0; r < active.size(); ++r) {
    c_active[r] = c[active[r]];
    c_max = std::max(c_max, c_active[r]);
    replica_total += c_active[r];
    for (int j = 0; j < m.cols(); ++j)
      m_active(static_cast<int>(r), j) = m(active[r], j);
  }
  // The program and the selection rule are invariant under a uniform
  // rescaling of the replica counts (mu absorbs it), so solve with weights
  // normalized to max 1 to keep the SDP well conditioned.
  std::vector<double> c_scaled(active.size());
  for (size_t r = 0; r < active.size(); ++r) c_scaled[r] = c_active[r] / c_max;
  detail::WeightedScaling ws = detail::weighted_scaling_sdp(m_active, c_scaled);
  double weighted_total = 0.0;
  for (size_t r = 0; r < active.size(); ++r)
    weighted_total += c_scaled[r] * c_scaled[r] * ws.mu[r];
  std::vector<double> pi_hat(k, 0.0);
  double selected_mass = 0.0;
  for (size_t r = 0; r < active.size(); ++r) {
    // Replica weight of row i: p~^2 = c_i mu_i / sum(c^2 mu), with the
    // threshold 2/k~ expressed in the rescaled weights.
    const double p_sq = c_scaled[r] * ws.mu[r] / weighted_total;
    if (p_sq <= 2.0 * c_max / replica_total) {
      pi_hat[active[r]] = c_active[r];
      selected_mass += c_active[r];
    }
  }
  require(2.0 * selected_mass >= replica_total, ErrorCode::kCertificateInvalid,
          "selection must keep at least half the replica mass");
  for (double& v : pi_hat) v /= selected_mass;
  // Factor-4 contract against the witness scaling value. The replica
  // program's value bounds the selected weighted norm by the projection
  // argument; rational rounding is absorbed by the slack.
  const double gamma_star = gamma2_star(u).value;
  double norm = -1.0;
  if (!pairing.empty())
    norm = norm_inf_to_two_paired(m, pi_hat, pairing);
  else if (m.cols() <= kMaxEnumerationColumns)
    norm = norm_inf_to_two(m, pi_hat);
  if (norm >= 0.0)
    require(norm <= 4.0 * gamma_star + 1e-6, ErrorCode::kCertificateInvalid,
            "reweighted norm exceeds four times gamma2*");
  return pi_hat;
}

// KL divergence bound for an eps-LDP transcript over n users separating the
// two distribution families: n e^eps (e^eps - 1)^2 ||M||^2_{inf->L2(pi)}.
inline double kl_bound(const Matrix& m, const std::vector<double>& pi,
                       double epsilon, double n,
                       const std::vector<int>& pairing = {}) {
  require(epsilon > 0.0, ErrorCode::kEpsilonNonpositive, "epsilon > 0");
  const double e = std::exp(epsilon);
  const double norm = pairing.empty() ? norm_inf_to_two(m, pi)
                                      : norm_inf_to_two_paired(m, pi, pairing);
  return n * e * (e - 1.0) * (e - 1.0) * norm * norm;
}

enum class CaseTag { kCase1, kCase2 };

// Hard distribution family certified by a dual witness: A_v is query-null,
// B_v is separated by at least 8 alpha', and the difference matrix has small
// weighted sup norm, bounding the KL divergence of any local transcript.
struct HardFamily {
  std::vector<double> pi_hat;
  Matrix a_dists;
  Matrix b_dists;  // after conditioning and (in Case 2) mixing
  double alpha_prime = 0.0;
  Matrix m_tilde;  // rows A_v - B_v, exactly
  DualCertificate witness;
  CaseTag case_tag = CaseTag::kCase1;
  double case2_beta = 0.0;
  std::vector<int> selected_bin;
};

namespace detail {

inline std::vector<double> per_row_b_values(const Workload& w, const Matrix& u,
                                            const BaseDistributions& base) {
  // q_v(B_v) = (2 / pi(v)) <W_v, U_v> restricted to the positive half.
  std::vector<double> a(w.w.rows(), 0.0);
  for (int v = 0; v < w.w.rows(); ++v) {
    if (!base.active[v]) continue;
    double s = 0.0;
    for (int j = 0; j < w.w.cols(); ++j)
      if (j < w.pairing[j]) s += w.w(v, j) * u(v, j);
    a[v] = 2.0 * s / base.pi[v];
  }
  return a;
}

}  // namespace detail

inline HardFamily hard_family(const Workload& w, const DualCertificate& cert,
                              double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::kCertificateInvalid,
          "alpha in (0, 1)");
  BaseDistributions base = base_distributions(w, cert.u);
  const int k = w.w.rows();
  const int cols = w.w.cols();
  std::vector<double> a = detail::per_row_b_values(w, cert.u, base);
  BinResult bin = exponential_binning(a, base.pi, alpha / 4.0);
  std::vector<bool> in_bin(k, false);
  for (int v : bin.s) in_bin[v] = true;
  // Condition pi on the selected bin.
  std::vector<double> pi_s(k, 0.0);
  for (int v : bin.s) pi_s[v] = base.pi[v] / bin.pi_mass;
  HardFamily fam;
  fam.witness = cert;
  fam.selected_bin = bin.s;
  fam.a_dists = base.a_dists;
  // B~_v = pi(S) B_v + (1 - pi(S)) A_v; rows off the bin keep B~ = A so the
  // difference matrix is supported on the bin. The bin mass can land an ulp
  // above 1 when the whole witness is selected; clamp so the mixture stays
  // a convex combination.
  fam.b_dists = Matrix(k, cols);
  const double ps = std::min(1.0, bin.pi_mass);
  for (int v = 0; v < k; ++v)
    for (int j = 0; j < cols; ++j)
      fam.b_dists(v, j) = in_bin[v]
                              ? ps * base.b_dists(v, j) +
                                    (1.0 - ps) * base.a_dists(v, j)
                              : base.a_dists(v, j);
  // Reweight the conditioned distribution through the replica program.
  Matrix m_cond(k, cols);
  for (int v = 0; v < k; ++v)
    for (int j = 0; j < cols; ++j)
      m_cond(v, j) = fam.a_dists(v, j) - fam.b_dists(v, j);
  Matrix u_cond(k, cols);
  for (int v = 0; v < k; ++v)
    for (int j = 0; j < cols; ++j) u_cond(v, j) = pi_s[v] * m_cond(v, j);
  fam.pi_hat = reweight_pi(m_cond, u_cond, pi_s, w.pairing);
  // Case 2: the witness correlation exceeds 2 alpha, so mix B~ toward A to
  // cap the separation while keeping the norm bound (beta <= 1 shrinks it).
  const double wu = dot(w.w, cert.u);
  if (wu > 2.0 * alpha) {
    fam.case_tag = CaseTag::kCase2;
    fam.case2_beta = std::min(1.0, alpha / wu);
    for (int v = 0; v < k; ++v)
      for (int j = 0; j < cols; ++j)
        fam.b_dists(v, j) = (1.0 - fam.case2_beta) * fam.a_dists(v, j) +
                            fam.case2_beta * fam.b_dists(v, j);
  }
  fam.m_tilde = Matrix(k, cols);
  for (int v = 0; v < k; ++v)
    for (int j = 0; j < cols; ++j)
      fam.m_tilde(v, j) = fam.a_dists(v, j) - fam.b_dists(v, j);
  // Separation: alpha' = min over supported rows of q_v(B_v) / 8.
  double min_q = 2.0;
  for (int v = 0; v < k; ++v) {
    if (fam.pi_hat[v] <= 0.0) continue;
    std::vector<double> bv(cols);
    for (int j = 0; j < cols; ++j) bv[j] = fam.b_dists(v, j);
    min_q = std::min(min_q, distribution_answers(w.w, bv)[v]);
  }
  fam.alpha_prime = min_q / 8.0;
  require(fam.alpha_prime > 0.0, ErrorCode::kCertificateInvalid,
          "hard family lost its separation");
  // Criterion 1: A_v answers every query with zero.
  for (int v = 0; v < k; ++v) {
    std::vector<double> av(cols);
    for (int j = 0; j < cols; ++j) av[j] = fam.a_dists(v, j);
    for (double q : distribution_answers(w.w, av))
      require(std::fabs(q) <= 1e-10, ErrorCode::kCertificateInvalid,
              "A distributions must be query-null");
  }
  // Criterion 3: weighted sup norm within factor 4 of gamma2*.
  const double norm =
      norm_inf_to_two_paired(fam.m_tilde, fam.pi_hat, w.pairing);
  require(norm <= 4.0 * cert.gamma2_star + 1e-6,
          ErrorCode::kCertificateInvalid,
          "difference norm exceeds four times gamma2*");
  return fam;
}

// End-to-end sample complexity certificate.
struct ScCertificate {
  double n_lower = 0.0;
  double alpha_prime = 0.0;
  HardFamily family;
  double kl_threshold = kKlTarget;
  double epsilon = 0.0;
  double alpha = 0.0;
  double m_norm = 0.0;  // ||M~||_{inf->L2(pi_hat)}
};

namespace detail {

// Extends a positive-half witness to the matched symmetric form
// U = (U+/2, -U+/2 on mirrored columns); preserves ||U||_1.
inline Matrix extend_witness(const Workload& sym, const Matrix& u_half) {
  Matrix u(sym.w.rows(), sym.w.cols());
  int col = 0;
  for (int j = 0; j < sym.w.cols(); ++j) {
    if (j >= sym.pairing[j]) continue;
    for (int v = 0; v < sym.w.rows(); ++v) {
      u(v, j) = 0.5 * u_half(v, col);
      u(v, sym.pairing[j]) = -0.5 * u_half(v, col);
    }
    ++col;
  }
  require(col == u_half.cols(), ErrorCode::kDimensionMismatch,
          "positive half size");
  return u;
}

}  // namespace detail

inline ScCertificate sample_complexity_lb(
    const Workload& w_in, double alpha, double epsilon,
    const SdpOptions& opts = detail::default_norm_options()) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorCode::kCertificateInvalid,
          "alpha in (0, 1]");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorCode::kEpsilonNonpositive,
          "epsilon in (0, 1]");
  Workload sym = w_in.symmetric ? w_in : symmetrize(w_in);
  // Witness on the positive half, then matched symmetric extension.
  Matrix w_half(sym.w.rows(), sym.w.cols() / 2);
  int col = 0;
  for (int j = 0; j < sym.w.cols(); ++j) {
    if (j >= sym.pairing[j]) continue;
    for (int v = 0; v < sym.w.rows(); ++v) w_half(v, col) = sym.w(v, j);
    ++col;
  }
  DualCertificate half_cert = dual_witness(w_half, alpha, opts);
  Matrix u_full = detail::extend_witness(sym, half_cert.u);
  DualCertificate cert =
      detail::certificate_from_witness(sym.w, alpha, u_full, opts);
  require(cert.objective > 0.0, ErrorCode::kDegenerateWitness,
          "extended witness lost its objective");
  ScCertificate out;
  out.epsilon = epsilon;
  out.alpha = alpha;
  out.family = hard_family(sym, cert, alpha);
  out.alpha_prime = out.family.alpha_prime;
  out.m_norm =
      norm_inf_to_two_paired(out.family.m_tilde, out.family.pi_hat,
                             sym.pairing);
  require(out.m_norm > 0.0, ErrorCode::kDegenerateWitness,
          "difference matrix vanished");
  const double e = std::exp(epsilon);
  out.n_lower =
      kKlTarget / (e * (e - 1.0) * (e - 1.0) * out.m_norm * out.m_norm);
  return out;
}

// Re-checks every certificate invariant from the data alone. Returns the
// names of violated criteria; empty means the certificate verifies.
inline std::vector<std::string> verify_certificate(const Workload& w_in,
                                                   const ScCertificate& cert) {
  const Workload sym = w_in.symmetric ? w_in : symmetrize(w_in);
  std::vector<std::string> violations;
  const HardFamily& fam = cert.family;
  const int k = sym.w.rows();
  const int cols = sym.w.cols();
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) violations.push_back(name);
  };
  double pi_sum = 0.0;
  bool nonneg = true;
  for (double v : fam.pi_hat) {
    pi_sum += v;
    nonneg = nonneg && v >= 0.0;
  }
  check(std::fabs(pi_sum - 1.0) <= 1e-12 && nonneg, "pi_hat distribution");
  bool rows_ok = true;
  for (int v = 0; v < k; ++v) {
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < cols; ++j) {
      if (fam.a_dists(v, j) < 0.0 || fam.b_dists(v, j) < 0.0) rows_ok = false;
      sa += fam.a_dists(v, j);
      sb += fam.b_dists(v, j);
    }
    if (std::fabs(sa - 1.0) > 1e-12 || std::fabs(sb - 1.0) > 1e-12)
      rows_ok = false;
  }
  check(rows_ok, "row distributions");
  bool null_ok = true;
  for (int v = 0; v < k && null_ok; ++v) {
    std::vector<double> av(cols);
    for (int j = 0; j < cols; ++j) av[j] = fam.a_dists(v, j);
    for (double q : distribution_answers(sym.w, av))
      if (std::fabs(q) > 1e-10) null_ok = false;
  }
  check(null_ok, "A distributions query-null");
  bool sep_ok = true;
  double min_q = 2.0;
  for (int v = 0; v < k; ++v) {
    if (fam.pi_hat[v] <= 0.0) continue;
    std::vector<double> bv(cols);
    for (int j = 0; j < cols; ++j) bv[j] = fam.b_dists(v, j);
    const double q = distribution_answers(sym.w, bv)[v];
    min_q = std::min(min_q, q);
    if (q < 8.0 * fam.alpha_prime - 1e-10) sep_ok = false;
  }
  check(sep_ok, "B separation");
  check(std::fabs(fam.alpha_prime - min_q / 8.0) <= 1e-12,
        "alpha_prime consistency");
  bool diff_ok = true;
  for (int v = 0; v < k && diff_ok; ++v)
    for (int j = 0; j < cols; ++j)
      if (fam.m_tilde(v, j) != fam.a_dists(v, j) - fam.b_dists(v, j)) {
        diff_ok = false;
        break;
      }
  check(diff_ok, "difference matrix rows");
  check(std::fabs(entry_sum_abs(fam.witness.u) - 1.0) <= 1e-9,
        "witness normalization");
  double norm = -1.0;
  try {
    norm = norm_inf_to_two_paired(fam.m_tilde, fam.pi_hat, sym.pairing);
  } catch (const Error&) {
    check(false, "difference matrix pairing");
  }
  if (norm >= 0.0) {
    check(norm <= 4.0 * fam.witness.gamma2_star + 1e-6, "factor-4 norm bound");
    check(std::fabs(norm - cert.m_norm) <= 1e-9, "stored norm consistency");
    const double e = std::exp(cert.epsilon);
    const double kl =
        cert.n_lower * e * (e - 1.0) * (e - 1.0) * norm * norm;
    check(std::fabs(kl - cert.kl_threshold) <= 1e-9, "sample bound identity");
  }
  check(std::fabs(cert.alpha_prime - fam.alpha_prime) <= 1e-12,
        "certificate alpha_prime");
  return violations;
}

}  // namespace privfact

#endif  // PRIVFACT_LOWER_BOUNDS_HPP_
