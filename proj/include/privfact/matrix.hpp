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

#ifndef PRIVFACT_MATRIX_HPP_
#define PRIVFACT_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "privfact/errors.hpp"

namespace privfact {

// Dense row-major matrix of doubles. Everything in this library is small and
// dense; no sparsity is exploited at this layer.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<size_t>(rows) * cols, fill) {
    require(rows >= 0 && cols >= 0, ErrorCode::kDimensionMismatch,
            "negative matrix dimension");
  }
  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(init.begin()->size());
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& row : init) {
      require(static_cast<int>(row.size()) == cols_,
              ErrorCode::kDimensionMismatch, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& other) const {
    require(cols_ == other.rows_, ErrorCode::kDimensionMismatch,
            "matrix product shape");
    Matrix out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        double a = (*this)(i, k);
        if (a == 0.0) continue;
        const double* brow = &other.data_[static_cast<size_t>(k) * other.cols_];
        double* orow = &out.data_[static_cast<size_t>(i) * other.cols_];
        for (int j = 0; j < other.cols_; ++j) orow[j] += a * brow[j];
      }
    }
    return out;
  }

  Matrix operator+(const Matrix& other) const {
    require(same_shape(other), ErrorCode::kDimensionMismatch, "matrix sum");
    Matrix out = *this;
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& other) const {
    require(same_shape(other), ErrorCode::kDimensionMismatch, "matrix diff");
    Matrix out = *this;
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
  }

  Matrix operator*(double s) const {
    Matrix out = *this;
    for (double& v : out.data_) v *= s;
    return out;
  }

  Matrix operator-() const { return (*this) * -1.0; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  std::vector<double> row(int i) const {
    return std::vector<double>(data_.begin() + static_cast<size_t>(i) * cols_,
                               data_.begin() +
                                   static_cast<size_t>(i + 1) * cols_);
  }

  std::vector<double> col(int j) const {
    std::vector<double> out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  // W x for a column vector x.
  std::vector<double> apply(const std::vector<double>& x) const {
    require(static_cast<int>(x.size()) == cols_, ErrorCode::kDimensionMismatch,
            "matrix-vector shape");
    std::vector<double> out(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      const double* rowp = &data_[static_cast<size_t>(i) * cols_];
      for (int j = 0; j < cols_; ++j) s += rowp[j] * x[j];
      out[i] = s;
    }
    return out;
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

inline Matrix operator*(double s, const Matrix& m) { return m * s; }

// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
inline double dot(const Matrix& a, const Matrix& b) {
  require(a.same_shape(b), ErrorCode::kDimensionMismatch, "frobenius dot");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

inline double frobenius_norm(const Matrix& a) { return std::sqrt(dot(a, a)); }

inline double entry_sum_abs(const Matrix& a) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::fabs(a.data()[i]);
  return s;
}

inline double max_abs_entry(const Matrix& a) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a.data()[i]));
  return s;
}

inline double trace(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::kDimensionMismatch, "trace");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

// Largest row 2-norm. For a factorization W = R A this is ||R||_{2->inf}.
inline double norm_two_to_inf(const Matrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

// Largest column 2-norm, ||A||_{1->2}.
inline double norm_one_to_two(const Matrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

// ||M||_{1->inf} = max_ij |M_ij| (unit l1 inputs are signed basis vectors).
inline double norm_one_to_inf(const Matrix& m) { return max_abs_entry(m); }

// Largest row sum of |entries|, ||M||_{inf->inf}.
inline double norm_inf_to_inf(const Matrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

// A dataset over a universe of size N is kept as its histogram: count per
// universe element, plus the total n (= sum of counts).
struct Histogram {
  std::vector<double> counts;
  double total() const {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
  }
};

// Exact query answers: q(X) = W h / n.
inline std::vector<double> answers(const Matrix& w, const Histogram& hist) {
  require(static_cast<int>(hist.counts.size()) == w.cols(),
          ErrorCode::kDimensionMismatch, "histogram size vs workload columns");
  double n = hist.total();
  require(n > 0.0, ErrorCode::kEmptyDataset, "histogram has zero mass");
  std::vector<double> out = w.apply(hist.counts);
  for (double& v : out) v /= n;
  return out;
}

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
};

inline void check_distribution(const std::vector<double>& p, double tol,
                               const std::string& what) {
  double s = 0.0;
  for (double v : p) {
    require(v >= -tol, ErrorCode::kInvalidDistribution,
            what + " has a negative entry");
    s += v;
  }
  require(std::fabs(s - 1.0) <= tol, ErrorCode::kInvalidDistribution,
          what + " does not sum to one");
}

}  // namespace privfact

#endif  // PRIVFACT_MATRIX_HPP_
