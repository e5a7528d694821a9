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

#ifndef PRIVFACT_GAMMA2_HPP_
#define PRIVFACT_GAMMA2_HPP_

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "privfact/eigen.hpp"
#include "privfact/errors.hpp"
#include "privfact/matrix.hpp"
#include "privfact/sdp.hpp"

namespace privfact {

enum class FactorKind { kInf, kFrobenius };

// W_tilde = R A with ||W - W_tilde||_{1->inf} <= approx_tolerance. For kind
// Inf the value is ||R||_{2->inf} * ||A||_{1->2}; for kind Frobenius it is
// (1/sqrt(k)) ||R||_F * ||A||_{1->2}.
struct Factorization {
  Matrix r;
  Matrix a;
  Matrix w_tilde;
  double approx_tolerance = 0.0;
  double value = 0.0;
  FactorKind kind = FactorKind::kInf;
};

inline double factorization_value(const Matrix& r, const Matrix& a,
                                  FactorKind kind) {
  if (kind == FactorKind::kInf) return norm_two_to_inf(r) * norm_one_to_two(a);
  return frobenius_norm(r) * norm_one_to_two(a) / std::sqrt(double(r.rows()));
}

// Rescales so that ||A||_{1->2} = 1; the product R A and the value are
// unchanged. No-op for an all-zero A (the t >= max|W| edge case).
inline Factorization normalize(Factorization f) {
  const double s = norm_one_to_two(f.a);
  if (s == 0.0) return f;
  f.a = f.a * (1.0 / s);
  f.r = f.r * s;
  f.value = factorization_value(f.r, f.a, f.kind);
  return f;
}

// Scaling pair certifying gamma2_star: U = P Utilde Q with diagonal P, Q,
// Tr(P^2) = Tr(Q^2) = 1 and ||Utilde||_2 <= gamma2_star.
struct GammaStarResult {
  double value = 0.0;
  std::vector<double> scaling_p;
  std::vector<double> scaling_q;
  Matrix u_tilde;
};

// Dual witness for the approximate factorization norm: for every U,
// gamma2(W, alpha) >= (W•U - alpha ||U||_1) / gamma2_star(U).
struct DualCertificate {
  Matrix u;  // normalized, ||U||_1 = 1
  double alpha = 0.0;
  double objective = 0.0;
  double gamma2_star = 0.0;
  std::vector<double> scaling_p;
  std::vector<double> scaling_q;
  Matrix u_tilde;
};

struct VerifyResult {
  bool weak_duality_ok = false;
  double gap = 0.0;
};

namespace detail {

inline Matrix entry_pin(int dim, int i, int j) {
  Matrix a(dim, dim);
  a(i, j) = 0.5;
  a(j, i) += 0.5;
  return a;
}

inline void check_solved(const SdpSolution& sol, const char* what) {
  if (sol.status == SdpStatus::kInfeasible)
    fail(ErrorCode::kInfeasible, std::string(what) + " SDP reported infeasible");
  if (sol.status != SdpStatus::kConverged)
    fail(ErrorCode::kMaxIterations,
         std::string(what) + " SDP hit the iteration cap");
}

// Shared extraction: factor the top-left m x m block of the solved
// (m+1)-dimensional variable into R (first q rows) and A (remaining rows,
// transposed).
inline Factorization extract_factorization(const Matrix& x, int q, int u,
                                           FactorKind kind) {
  const int m = q + u;
  Matrix block(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) block(i, j) = x(i, j);
  Matrix f = factor_psd(block, 1e-9);
  const int r = f.cols();
  Factorization out;
  out.kind = kind;
  out.r = Matrix(q, r);
  out.a = Matrix(r, u);
  for (int i = 0; i < q; ++i)
    for (int c = 0; c < r; ++c) out.r(i, c) = f(i, c);
  for (int j = 0; j < u; ++j)
    for (int c = 0; c < r; ++c) out.a(c, j) = f(q + j, c);
  return out;
}

inline SdpOptions default_norm_options() {
  SdpOptions opts;
  opts.tol = 1e-7;
  return opts;
}

}  // namespace detail

// Exact factorization norm: the smallest ||R||_{2->inf} ||A||_{1->2} over
// W = R A, computed as min t over PSD [[X, W], [W^T, Y]] with
// max(diag X, diag Y) <= t. The scalar t rides along as one extra diagonal
// entry of the PSD variable; its coupling row is unconstrained and
// vanishes at an optimum.
inline Factorization gamma2(const Matrix& w,
                            const SdpOptions& opts = detail::default_norm_options()) {
  const int q = w.rows();
  const int u = w.cols();
  require(q >= 1 && u >= 1, ErrorCode::kDimensionMismatch, "empty workload");
  require(entry_sum_abs(w) > 0.0, ErrorCode::kZeroMatrix,
          "factorization norm of the zero matrix");
  const int m = q + u;
  SdpProblem p;
  p.dim = m + 1;
  p.objective = Matrix(m + 1, m + 1);
  p.objective(m, m) = 1.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < u; ++j)
      p.equalities.push_back({detail::entry_pin(m + 1, i, q + j), w(i, j)});
  for (int i = 0; i < m; ++i) {
    Matrix a(m + 1, m + 1);
    a(i, i) = 1.0;
    a(m, m) = -1.0;
    p.inequalities.push_back({a, 0.0});
  }
  SdpSolution sol = solve_sdp(p, opts);
  detail::check_solved(sol, "gamma2");
  Factorization f =
      detail::extract_factorization(sol.x, q, u, FactorKind::kInf);
  f.w_tilde = w;
  f.approx_tolerance = 0.0;
  f = normalize(f);
  return f;
}

namespace detail {

struct ApproxSolve {
  Factorization factorization;
  SdpSolution solution;
  int q = 0;
  int u = 0;
};

// gamma2 with the target freed inside the entrywise box [W - t, W + t].
// Box rows come first in the inequality list, upper bound then lower bound
// per entry, so dual extraction can address them by index.
inline ApproxSolve gamma2_approx_solve(const Matrix& w, double t,
                                       const SdpOptions& opts) {
  const int q = w.rows();
  const int u = w.cols();
  require(q >= 1 && u >= 1, ErrorCode::kDimensionMismatch, "empty workload");
  require(t >= 0.0, ErrorCode::kDimensionMismatch,
          "approximation tolerance must be non-negative");
  ApproxSolve out;
  out.q = q;
  out.u = u;
  if (t >= norm_one_to_inf(w)) {
    // The all-zero matrix sits inside the box, and gamma2(0) = 0.
    Factorization f;
    f.kind = FactorKind::kInf;
    f.r = Matrix(q, 1);
    f.a = Matrix(1, u);
    f.w_tilde = Matrix(q, u);
    f.approx_tolerance = t;
    f.value = 0.0;
    out.factorization = std::move(f);
    out.solution.status = SdpStatus::kConverged;
    return out;
  }
  const int m = q + u;
  SdpProblem p;
  p.dim = m + 1;
  p.objective = Matrix(m + 1, m + 1);
  p.objective(m, m) = 1.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < u; ++j) {
      p.inequalities.push_back({entry_pin(m + 1, i, q + j), w(i, j) + t});
      p.inequalities.push_back(
          {entry_pin(m + 1, i, q + j) * -1.0, -(w(i, j) - t)});
    }
  for (int i = 0; i < m; ++i) {
    Matrix a(m + 1, m + 1);
    a(i, i) = 1.0;
    a(m, m) = -1.0;
    p.inequalities.push_back({a, 0.0});
  }
  SdpSolution sol = solve_sdp(p, opts);
  detail::check_solved(sol, "gamma2_approx");
  Factorization f = extract_factorization(sol.x, q, u, FactorKind::kInf);
  // Clamp the realized target back into the box; solver residue is tiny.
  f.w_tilde = Matrix(q, u);
  Matrix ra = f.r * f.a;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < u; ++j)
      f.w_tilde(i, j) =
          std::clamp(ra(i, j), w(i, j) - t, w(i, j) + t);
  f.approx_tolerance = t;
  f = normalize(f);
  out.factorization = std::move(f);
  out.solution = std::move(sol);
  return out;
}

}  // namespace detail

inline Factorization gamma2_approx(
    const Matrix& w, double t,
    const SdpOptions& opts = detail::default_norm_options()) {
  return detail::gamma2_approx_solve(w, t, opts).factorization;
}

// Frobenius variant: min (1/sqrt(k)) ||R||_F ||A||_{1->2} over W = R A,
// as min Tr(X)/k with diag(Y) <= 1; the value is sqrt(opt / k).
inline Factorization gamma2_frobenius(
    const Matrix& w, const SdpOptions& opts = detail::default_norm_options()) {
  const int q = w.rows();
  const int u = w.cols();
  require(q >= 1 && u >= 1, ErrorCode::kDimensionMismatch, "empty workload");
  require(entry_sum_abs(w) > 0.0, ErrorCode::kZeroMatrix,
          "factorization norm of the zero matrix");
  const int m = q + u;
  SdpProblem p;
  p.dim = m;
  p.objective = Matrix(m, m);
  for (int i = 0; i < q; ++i) p.objective(i, i) = 1.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < u; ++j)
      p.equalities.push_back({detail::entry_pin(m, i, q + j), w(i, j)});
  for (int j = 0; j < u; ++j) {
    Matrix a(m, m);
    a(q + j, q + j) = 1.0;
    p.inequalities.push_back({a, 1.0});
  }
  SdpSolution sol = solve_sdp(p, opts);
  detail::check_solved(sol, "gamma2_frobenius");
  Factorization f =
      detail::extract_factorization(sol.x, q, u, FactorKind::kFrobenius);
  f.w_tilde = w;
  f.approx_tolerance = 0.0;
  f = normalize(f);
  return f;
}

// gamma2_star(U) = max sum_ij U_ij <x_i, y_j> over unit vectors, solved from
// the scaling side: min sum(mu) + sum(nu) subject to
// [[diag(mu), U/2], [U^T/2, diag(nu)]] PSD (all off-diagonal entries pinned).
// Strong duality makes the optimum equal the vector-form maximum, and the
// optimal diagonal hands over the scaling vectors P, Q directly.
inline GammaStarResult gamma2_star(
    const Matrix& u, const SdpOptions& opts = detail::default_norm_options()) {
  const int k = u.rows();
  const int n = u.cols();
  require(k >= 1 && n >= 1, ErrorCode::kDimensionMismatch, "empty witness");
  require(entry_sum_abs(u) > 0.0, ErrorCode::kZeroMatrix,
          "gamma2_star of the zero matrix");
  const int m = k + n;
  SdpProblem p;
  p.dim = m;
  p.objective = Matrix::identity(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const bool cross = i < k && j >= k;
      const double target = cross ? 0.5 * u(i, j - k) : 0.0;
      p.equalities.push_back({detail::entry_pin(m, i, j), target});
    }
  SdpSolution sol = solve_sdp(p, opts);
  detail::check_solved(sol, "gamma2_star");
  GammaStarResult out;
  out.value = sol.value;
  std::vector<double> mu(k), nu(n);
  double sr = 0.0, sc = 0.0;
  for (int i = 0; i < k; ++i) {
    mu[i] = std::max(0.0, sol.x(i, i));
    sr += mu[i];
  }
  for (int j = 0; j < n; ++j) {
    nu[j] = std::max(0.0, sol.x(k + j, k + j));
    sc += nu[j];
  }
  require(sr > 0.0 && sc > 0.0, ErrorCode::kSolverFailed,
          "degenerate scaling diagonal");
  out.scaling_p.resize(k);
  out.scaling_q.resize(n);
  for (int i = 0; i < k; ++i) out.scaling_p[i] = std::sqrt(mu[i] / sr);
  for (int j = 0; j < n; ++j) out.scaling_q[j] = std::sqrt(nu[j] / sc);
  // Utilde = P^{-1} U Q^{-1} on the support; exact kernel rows/columns of
  // the scaling are zeroed (pseudo-inverse convention).
  out.u_tilde = Matrix(k, n);
  const double p_floor = 1e-9;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) {
      const double pi = out.scaling_p[i];
      const double qj = out.scaling_q[j];
      out.u_tilde(i, j) =
          (pi > p_floor && qj > p_floor) ? u(i, j) / (pi * qj) : 0.0;
    }
  return out;
}

// Lower bound on gamma2(W, t) through the trace norm: the minimum of
// ||W_tilde||_tr / sqrt(rows*cols) over the box, as an SDP in
// [[P, W_tilde], [W_tilde^T, Q]] with objective (Tr P + Tr Q)/2.
inline double trace_norm_lb(
    const Matrix& w, double t,
    const SdpOptions& opts = detail::default_norm_options()) {
  const int q = w.rows();
  const int u = w.cols();
  require(q >= 1 && u >= 1, ErrorCode::kDimensionMismatch, "empty workload");
  require(t >= 0.0, ErrorCode::kDimensionMismatch,
          "approximation tolerance must be non-negative");
  if (t >= norm_one_to_inf(w)) return 0.0;
  const int m = q + u;
  SdpProblem p;
  p.dim = m;
  p.objective = Matrix::identity(m) * 0.5;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < u; ++j) {
      if (t == 0.0) {
        p.equalities.push_back({detail::entry_pin(m, i, q + j), w(i, j)});
      } else {
        p.inequalities.push_back({detail::entry_pin(m, i, q + j), w(i, j) + t});
        p.inequalities.push_back(
            {detail::entry_pin(m, i, q + j) * -1.0, -(w(i, j) - t)});
      }
    }
  SdpSolution sol = solve_sdp(p, opts);
  detail::check_solved(sol, "trace_norm_lb");
  return sol.value / std::sqrt(static_cast<double>(q) * u);
}

// Builds the heuristic witness U = W / ||W||_1.
inline Matrix heuristic_witness(const Matrix& w) {
  const double s = entry_sum_abs(w);
  require(s > 0.0, ErrorCode::kZeroMatrix, "witness for the zero matrix");
  return w * (1.0 / s);
}

namespace detail {

inline DualCertificate certificate_from_witness(const Matrix& w, double alpha,
                                                const Matrix& u_normalized,
                                                const SdpOptions& opts) {
  DualCertificate cert;
  cert.u = u_normalized;
  cert.alpha = alpha;
  GammaStarResult gs = gamma2_star(u_normalized, opts);
  cert.gamma2_star = gs.value;
  cert.scaling_p = std::move(gs.scaling_p);
  cert.scaling_q = std::move(gs.scaling_q);
  cert.u_tilde = std::move(gs.u_tilde);
  cert.objective = (dot(w, cert.u) - alpha) / cert.gamma2_star;
  return cert;
}

}  // namespace detail

// Extracts a witness from the box-constraint multipliers of the
// gamma2_approx SDP; each entry's upper/lower multipliers difference points
// along the subgradient of the optimal value in W. Falls back to the
// heuristic witness when the multipliers are noisy (relative duality gap
// above 10%) or vanish.
inline DualCertificate dual_witness(
    const Matrix& w, double alpha,
    const SdpOptions& opts = detail::default_norm_options()) {
  detail::ApproxSolve solve = detail::gamma2_approx_solve(w, alpha, opts);
  const double primal = solve.factorization.value;
  const int q = solve.q;
  const int u = solve.u;
  Matrix u_raw(q, u);
  bool have_multipliers = false;
  if (!solve.solution.dual_ineq.empty()) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < u; ++j) {
        const int base = 2 * (i * u + j);
        // lower-bound multiplier minus upper-bound multiplier.
        u_raw(i, j) = solve.solution.dual_ineq[base + 1] -
                      solve.solution.dual_ineq[base];
      }
    have_multipliers = entry_sum_abs(u_raw) > 1e-10;
  }
  DualCertificate cert;
  bool used_multipliers = false;
  if (have_multipliers) {
    cert = detail::certificate_from_witness(
        w, alpha, u_raw * (1.0 / entry_sum_abs(u_raw)), opts);
    used_multipliers = true;
    const double gap = primal - cert.objective;
    if (primal > 0.0 && gap > 0.10 * primal) used_multipliers = false;
  }
  if (!used_multipliers) {
    cert = detail::certificate_from_witness(w, alpha, heuristic_witness(w),
                                            opts);
  }
  require(cert.objective > 0.0, ErrorCode::kDegenerateWitness,
          "dual witness has non-positive objective");
  return cert;
}

// Re-checks a certificate from scratch: structural invariants, a fresh
// gamma2_star solve, and weak duality against a fresh primal solve.
inline VerifyResult verify_dual(
    const Matrix& w, double alpha, const DualCertificate& cert,
    const SdpOptions& opts = detail::default_norm_options()) {
  require(std::fabs(entry_sum_abs(cert.u) - 1.0) <= 1e-9,
          ErrorCode::kNotNormalized, "witness is not entrywise normalized");
  require(cert.u.rows() == w.rows() && cert.u.cols() == w.cols(),
          ErrorCode::kDimensionMismatch, "witness shape");
  double sp = 0.0, sq = 0.0;
  for (double v : cert.scaling_p) sp += v * v;
  for (double v : cert.scaling_q) sq += v * v;
  require(std::fabs(sp - 1.0) <= 1e-6 && std::fabs(sq - 1.0) <= 1e-6,
          ErrorCode::kCertificateInvalid, "scaling vectors not normalized");
  GammaStarResult gs = gamma2_star(cert.u, opts);
  // Reconstruction U = P Utilde Q must hold on the certificate's own data.
  for (int i = 0; i < cert.u.rows(); ++i)
    for (int j = 0; j < cert.u.cols(); ++j) {
      const double back =
          cert.scaling_p[i] * cert.u_tilde(i, j) * cert.scaling_q[j];
      require(std::fabs(back - cert.u(i, j)) <= 1e-6,
              ErrorCode::kCertificateInvalid,
              "scaling decomposition does not reproduce the witness");
    }
  require(spectral_norm(cert.u_tilde) <= gs.value * (1.0 + 1e-4),
          ErrorCode::kCertificateInvalid,
          "scaled witness exceeds the spectral budget");
  const double objective = (dot(w, cert.u) - alpha) / gs.value;
  const double primal = gamma2_approx(w, alpha, opts).value;
  VerifyResult out;
  out.gap = primal - objective;
  out.weak_duality_ok = objective <= primal + 1e-4;
  return out;
}

}  // namespace privfact

#endif  // PRIVFACT_GAMMA2_HPP_
