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

#ifndef PRIVFACT_EIGEN_HPP_
#define PRIVFACT_EIGEN_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "privfact/errors.hpp"
#include "privfact/matrix.hpp"

namespace privfact {

// Full eigendecomposition of a symmetric matrix: values ascending, column j
// of `vectors` is the unit eigenvector for values[j].
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

namespace detail {

// Householder reduction to tridiagonal form with accumulated transform.
// On exit `a` holds the orthogonal matrix, d the diagonal, e the
// subdiagonal (e[0] unused).
inline void householder_tridiagonalize(Matrix& a, std::vector<double>& d,
                                       std::vector<double>& e) {
  const int n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          a(j, i) = a(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
          e[j] = g / h;
          f += e[j] * a(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = a(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
        for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
  }
}

// Implicit QL with Wilkinson shifts on a tridiagonal matrix; rotations are
// accumulated into z.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           Matrix& z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
          break;
      }
      if (m != l) {
        require(iter++ < 100, ErrorCode::kSolverFailed,
                "eigensolver exceeded the rotation budget");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
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
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
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

// Symmetric eigendecomposition. The input is symmetrized (averaged with its
// transpose) before reduction so tiny asymmetries from upstream arithmetic
// cannot leak in.
inline EigenDecomposition eigen_sym(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch,
          "eigen_sym needs a square matrix");
  const int n = m.rows();
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  std::vector<double> d;
  std::vector<double> e;
  detail::householder_tridiagonalize(a, d, e);
  detail::tridiagonal_ql(d, e, a);
  // Sort ascending; index sort keeps the permutation deterministic.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return d[x] < d[y]; });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (int i = 0; i < n; ++i) out.vectors(i, j) = a(i, order[j]);
  }
  return out;
}

// Nearest PSD matrix in Frobenius norm: clamp negative eigenvalues to zero.
inline Matrix project_psd(const Matrix& m) {
  EigenDecomposition ed = eigen_sym(m);
  const int n = m.rows();
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = ed.values[k];
    if (lam <= 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double vik = ed.vectors(i, k) * lam;
      if (vik == 0.0) continue;
      for (int j = 0; j <= i; ++j) out(i, j) += vik * ed.vectors(j, k);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(j, i) = out(i, j);
  return out;
}

// F with X = F Fᵀ, columns ordered by descending eigenvalue; eigenvalues
// below `tol` are treated as zero rank.
inline Matrix factor_psd(const Matrix& x, double tol = 1e-9) {
  EigenDecomposition ed = eigen_sym(x);
  const int n = x.rows();
  std::vector<int> keep;
  for (int k = n - 1; k >= 0; --k)
    if (ed.values[k] > tol) keep.push_back(k);
  const int r = std::max<int>(1, static_cast<int>(keep.size()));
  Matrix f(n, r);
  for (size_t c = 0; c < keep.size(); ++c) {
    const double s = std::sqrt(ed.values[keep[c]]);
    for (int i = 0; i < n; ++i)
      f(i, static_cast<int>(c)) = s * ed.vectors(i, keep[c]);
  }
  return f;
}

// Symmetric square root of a PSD matrix (negative eigenvalues clamped).
inline Matrix sqrt_psd(const Matrix& m) {
  EigenDecomposition ed = eigen_sym(m);
  const int n = m.rows();
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::sqrt(std::max(0.0, ed.values[k]));
    if (lam == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        out(i, j) += lam * ed.vectors(i, k) * ed.vectors(j, k);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(j, i) = out(i, j);
  return out;
}

// Pseudo-inverse symmetric square root: eigenvalues below rel_tol times the
// largest are treated as an exact kernel.
struct PseudoSqrtInverse {
  Matrix m;
  std::vector<double> eigenvalues;  // of the input, ascending
  double cutoff = 0.0;
};

inline PseudoSqrtInverse pseudo_inv_sqrt(const Matrix& sigma,
                                         double rel_tol = 1e-10) {
  EigenDecomposition ed = eigen_sym(sigma);
  const int n = sigma.rows();
  double lmax = 0.0;
  for (double v : ed.values) lmax = std::max(lmax, v);
  const double cutoff = lmax * rel_tol;
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    if (ed.values[k] <= cutoff) continue;
    const double lam = 1.0 / std::sqrt(ed.values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        out(i, j) += lam * ed.vectors(i, k) * ed.vectors(j, k);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(j, i) = out(i, j);
  return {out, ed.values, cutoff};
}

// Singular values, descending, via the Gram matrix of the smaller side.
inline std::vector<double> singular_values(const Matrix& m) {
  const bool tall = m.rows() >= m.cols();
  const Matrix mt = m.transpose();
  const Matrix gram = tall ? (mt * m) : (m * mt);
  EigenDecomposition ed = eigen_sym(gram);
  std::vector<double> out(ed.values.size());
  for (size_t i = 0; i < out.size(); ++i) {
    const double lam = ed.values[ed.values.size() - 1 - i];
    out[i] = std::sqrt(std::max(0.0, lam));
  }
  return out;
}

inline double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return singular_values(m)[0];
}

inline double trace_norm(const Matrix& m) {
  std::vector<double> sv = singular_values(m);
  double s = 0.0;
  for (double v : sv) s += v;
  return s;
}

inline double min_eigenvalue(const Matrix& m) {
  return eigen_sym(m).values.front();
}

}  // namespace privfact

#endif  // PRIVFACT_EIGEN_HPP_
