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

#ifndef PRIVFACT_SDP_HPP_
#define PRIVFACT_SDP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "privfact/eigen.hpp"
#include "privfact/errors.hpp"
#include "privfact/matrix.hpp"

namespace privfact {

// <a, X> compared against b. Constraint matrices are interpreted through
// their symmetric part.
struct LinearConstraint {
  Matrix a;
  double b = 0.0;
};

enum class SdpStatus { kConverged, kMaxIterations, kInfeasible };

inline const char* sdp_status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::kConverged: return "Converged";
    case SdpStatus::kMaxIterations: return "MaxIterations";
    case SdpStatus::kInfeasible: return "Infeasible";
  }
  return "Unknown";
}

// min <C, X> s.t. <A_i, X> = b_i, <B_j, X> <= d_j, X PSD.
struct SdpProblem {
  int dim = 0;
  Matrix objective;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;
};

struct SdpSolution {
  Matrix x;                        // exactly PSD (eigenvalue-clamped iterate)
  double value = 0.0;              // <C, x>
  std::vector<double> dual_eq;     // multipliers y_i
  std::vector<double> dual_ineq;   // multipliers z_j >= 0
  double primal_residual = 0.0;    // normalized consensus residual
  double dual_residual = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::kMaxIterations;
};

struct SdpOptions {
  double tol = 1e-6;
  int max_iter = 50000;
  double rho = 1.0;
  double over_relax = 1.6;
  bool adapt_rho = true;
};

namespace detail {

// Index of (i, j), i <= j, in the packed upper triangle.
inline int svec_index(int i, int j, int n) {
  return i * n - (i * (i - 1)) / 2 + (j - i);
}

inline int svec_size(int n) { return n * (n + 1) / 2; }

constexpr double kSqrt2 = 1.4142135623730951;

// Packs a symmetric matrix so that dot products of packs equal Frobenius
// dots of the originals (off-diagonal entries carry sqrt(2)).
inline void svec_accumulate(const Matrix& a,
                            std::vector<std::pair<int, double>>& out) {
  const int n = a.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = (i == j) ? a(i, i) : 0.5 * (a(i, j) + a(j, i)) * kSqrt2;
      if (v != 0.0) out.emplace_back(svec_index(i, j, n), v);
    }
  }
}

// Dense Cholesky, lower triangular in place. Returns false on a
// non-positive pivot.
inline bool cholesky(Matrix& g) {
  const int n = g.rows();
  for (int j = 0; j < n; ++j) {
    double d = g(j, j);
    for (int k = 0; k < j; ++k) d -= g(j, k) * g(j, k);
    if (d <= 0.0) return false;
    const double s = std::sqrt(d);
    g(j, j) = s;
    for (int i = j + 1; i < n; ++i) {
      double v = g(i, j);
      for (int k = 0; k < j; ++k) v -= g(i, k) * g(j, k);
      g(i, j) = v / s;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g(i, j) = 0.0;
  return true;
}

inline void cholesky_solve(const Matrix& l, std::vector<double>& x) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    double v = x[i];
    for (int k = 0; k < i; ++k) v -= l(i, k) * x[k];
    x[i] = v / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double v = x[i];
    for (int k = i + 1; k < n; ++k) v -= l(k, i) * x[k];
    x[i] = v / l(i, i);
  }
}

}  // namespace detail

// Operator-splitting (ADMM) solver. The variable is split as x = z where x
// lives on the affine set {A x = b} (PSD block packed + one slack per
// inequality) and z lives on the cone (PSD block, non-negative slacks); the
// returned matrix is the cone-side iterate, so it is exactly PSD.
// Deterministic: fixed iteration order, no randomness, no threads.
inline SdpSolution solve_sdp(const SdpProblem& prob,
                             const SdpOptions& opts = {}) {
  const int n = prob.dim;
  require(n >= 1, ErrorCode::kDimensionMismatch, "SDP dimension");
  require(prob.objective.rows() == n && prob.objective.cols() == n,
          ErrorCode::kDimensionMismatch, "objective shape");
  const int nv = detail::svec_size(n);
  const int n_eq = static_cast<int>(prob.equalities.size());
  const int n_ineq = static_cast<int>(prob.inequalities.size());
  const int total = nv + n_ineq;

  // Constraint rows over packed coordinates; inequality j also carries its
  // slack coordinate nv + j.
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rhs;
  std::vector<double> row_scale;
  std::vector<int> row_kind;  // 0 equality, 1 inequality
  std::vector<int> row_orig;  // index into the matching constraint list
  rows.reserve(n_eq + n_ineq);
  for (int i = 0; i < n_eq + n_ineq; ++i) {
    const bool eq = i < n_eq;
    const LinearConstraint& c =
        eq ? prob.equalities[i] : prob.inequalities[i - n_eq];
    require(c.a.rows() == n && c.a.cols() == n, ErrorCode::kDimensionMismatch,
            "constraint shape");
    std::vector<std::pair<int, double>> row;
    detail::svec_accumulate(c.a, row);
    if (!eq) row.emplace_back(nv + (i - n_eq), 1.0);
    double norm2 = 0.0;
    for (const auto& [idx, val] : row) norm2 += val * val;
    const double scale = std::sqrt(norm2);
    if (scale == 0.0) {
      if (std::fabs(c.b) > 1e-12) {
        SdpSolution sol;
        sol.status = SdpStatus::kInfeasible;
        sol.x = Matrix(n, n);
        return sol;
      }
      continue;  // vacuous row
    }
    for (auto& [idx, val] : row) val /= scale;
    rows.push_back(std::move(row));
    rhs.push_back(c.b / scale);
    row_scale.push_back(scale);
    row_kind.push_back(eq ? 0 : 1);
    row_orig.push_back(eq ? i : i - n_eq);
  }
  const int m = static_cast<int>(rows.size());

  // Gram of the normalized rows, assembled coordinate by coordinate.
  Matrix chol(m, m);
  {
    std::vector<std::vector<std::pair<int, double>>> by_coord(total);
    for (int r = 0; r < m; ++r)
      for (const auto& [idx, val] : rows[r]) by_coord[idx].emplace_back(r, val);
    for (const auto& list : by_coord)
      for (size_t a = 0; a < list.size(); ++a)
        for (size_t b = 0; b <= a; ++b)
          chol(list[a].first, list[b].first) += list[a].second * list[b].second;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) chol(i, j) = chol(j, i);
    Matrix attempt = chol;
    if (!detail::cholesky(attempt)) {
      // Dependent rows; a small ridge keeps the projection well posed.
      for (int i = 0; i < m; ++i) chol(i, i) += 1e-10;
      require(detail::cholesky(chol), ErrorCode::kSolverFailed,
              "constraint Gram factorization failed");
    } else {
      chol = std::move(attempt);
    }
  }

  std::vector<double> c_vec(total, 0.0);
  {
    std::vector<std::pair<int, double>> c_pack;
    detail::svec_accumulate(prob.objective, c_pack);
    for (const auto& [idx, val] : c_pack) c_vec[idx] = val;
  }

  std::vector<double> x(total, 0.0);
  std::vector<double> z(total, 0.0);
  std::vector<double> v(total, 0.0);
  std::vector<double> z_prev(total, 0.0);
  std::vector<double> xi(m, 0.0);
  std::vector<double> g(total, 0.0);
  std::vector<double> resid(m, 0.0);
  Matrix block(n, n);

  double rho = opts.rho;
  SdpSolution sol;
  sol.status = SdpStatus::kMaxIterations;
  double vnorm_half = -1.0;  // ||v|| recorded at iteration k/2 checkpoints
  int next_check = 2000;

  const auto norm2 = [](const std::vector<double>& a) {
    double s = 0.0;
    for (double t : a) s += t * t;
    return std::sqrt(s);
  };

  int iter = 0;
  for (iter = 1; iter <= opts.max_iter; ++iter) {
    // x-update: project z - v - C/rho onto {A x = b}.
    for (int i = 0; i < total; ++i) g[i] = z[i] - v[i] - c_vec[i] / rho;
    if (m > 0) {
      for (int r = 0; r < m; ++r) {
        double s = rhs[r];
        for (const auto& [idx, val] : rows[r]) s -= val * g[idx];
        resid[r] = s;
      }
      detail::cholesky_solve(chol, resid);
      xi = resid;
      x = g;
      for (int r = 0; r < m; ++r) {
        const double w = xi[r];
        if (w == 0.0) continue;
        for (const auto& [idx, val] : rows[r]) x[idx] += val * w;
      }
    } else {
      x = g;
    }

    // z-update on the relaxed point: PSD projection of the packed block,
    // clamp for the slacks.
    z_prev = z;
    const double alpha = opts.over_relax;
    for (int i = 0; i < total; ++i) g[i] = alpha * x[i] + (1.0 - alpha) * z[i] + v[i];
    {
      int p = 0;
      for (int i = 0; i < n; ++i) {
        block(i, i) = g[p++];
        for (int j = i + 1; j < n; ++j) {
          const double val = g[p++] / detail::kSqrt2;
          block(i, j) = val;
          block(j, i) = val;
        }
      }
      Matrix proj = project_psd(block);
      p = 0;
      for (int i = 0; i < n; ++i) {
        z[p++] = proj(i, i);
        for (int j = i + 1; j < n; ++j) z[p++] = proj(i, j) * detail::kSqrt2;
      }
      for (int s = nv; s < total; ++s) z[s] = std::max(0.0, g[s]);
    }

    // Scaled dual update.
    for (int i = 0; i < total; ++i)
      v[i] += alpha * x[i] + (1.0 - alpha) * z_prev[i] - z[i];

    // Residuals (normalized).
    double rnum = 0.0;
    double xn = 0.0;
    double zn = 0.0;
    double snum = 0.0;
    double vn = 0.0;
    for (int i = 0; i < total; ++i) {
      const double dxz = x[i] - z[i];
      rnum += dxz * dxz;
      xn += x[i] * x[i];
      zn += z[i] * z[i];
      const double dz = z[i] - z_prev[i];
      snum += dz * dz;
      vn += v[i] * v[i];
    }
    const double r_rel =
        std::sqrt(rnum) / std::max(1.0, std::sqrt(std::max(xn, zn)));
    const double s_rel = rho * std::sqrt(snum) / std::max(1.0, rho * std::sqrt(vn));
    sol.primal_residual = r_rel;
    sol.dual_residual = s_rel;

    if (r_rel < opts.tol && s_rel < opts.tol) {
      sol.status = SdpStatus::kConverged;
      break;
    }

    if (opts.adapt_rho && iter % 100 == 0) {
      if (r_rel > 10.0 * s_rel && rho < 1e6) {
        rho *= 2.0;
        for (double& t : v) t *= 0.5;
      } else if (s_rel > 10.0 * r_rel && rho > 1e-4) {
        rho *= 0.5;
        for (double& t : v) t *= 2.0;
      }
    }

    // Divergence of the (unscaled) dual iterate rho*v while the consensus
    // gap stays wide is the practical infeasibility signature; the gap
    // itself plateaus. rho*v is invariant under the rho rescaling above.
    if (iter == next_check / 2) vnorm_half = rho * norm2(v);
    if (iter == next_check) {
      const double vn_now = rho * norm2(v);
      if (vnorm_half > 1e-8 && vn_now > 1.8 * vnorm_half &&
          r_rel > 100.0 * opts.tol) {
        sol.status = SdpStatus::kInfeasible;
        break;
      }
      vnorm_half = vn_now;
      next_check *= 2;
    }
  }
  sol.iterations = std::min(iter, opts.max_iter);

  // Unpack the cone-side iterate (exactly PSD by construction).
  sol.x = Matrix(n, n);
  {
    int p = 0;
    for (int i = 0; i < n; ++i) {
      sol.x(i, i) = z[p++];
      for (int j = i + 1; j < n; ++j) {
        const double val = z[p++] / detail::kSqrt2;
        sol.x(i, j) = val;
        sol.x(j, i) = val;
      }
    }
  }
  sol.value = dot(prob.objective, sol.x);

  // Multipliers: the x-update's projection multiplier is rho * xi; undo the
  // row normalization. Inequality multipliers flip sign (slack coordinate
  // has +1 coefficient and zero cost).
  sol.dual_eq.assign(n_eq, 0.0);
  sol.dual_ineq.assign(n_ineq, 0.0);
  for (int r = 0; r < m; ++r) {
    const double y = rho * xi[r] / row_scale[r];
    if (row_kind[r] == 0) {
      sol.dual_eq[row_orig[r]] = y;
    } else {
      sol.dual_ineq[row_orig[r]] = std::max(0.0, -y);
    }
  }
  return sol;
}

}  // namespace privfact

#endif  // PRIVFACT_SDP_HPP_
