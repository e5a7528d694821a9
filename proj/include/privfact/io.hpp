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

#ifndef PRIVFACT_IO_HPP_
#define PRIVFACT_IO_HPP_

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "privfact/errors.hpp"
#include "privfact/matrix.hpp"
#include "privfact/workloads.hpp"

namespace privfact {

// Shortest exact decimal for a double; the same bytes on every rerun.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::kIoFailure, "cannot open " + path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  require(out.good(), ErrorCode::kIoFailure, "write failed for " + path);
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIoFailure, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.emplace_back();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      try {
        rows.back().push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::kIoFailure, "bad number '" + cell + "' in " + path);
      }
    require(rows.back().size() == rows.front().size(),
            ErrorCode::kIoFailure, "ragged rows in " + path);
  }
  require(!rows.empty() && !rows.front().empty(), ErrorCode::kIoFailure,
          "empty matrix in " + path);
  Matrix m(static_cast<int>(rows.size()),
           static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline void write_vector_csv(const std::string& path,
                             const std::vector<double>& v) {
  Matrix m(static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m(static_cast<int>(i), 0) = v[i];
  write_matrix_csv(path, m);
}

inline std::vector<double> read_vector_csv(const std::string& path) {
  Matrix m = read_matrix_csv(path);
  require(m.cols() == 1, ErrorCode::kIoFailure,
          "expected a single column in " + path);
  std::vector<double> v(m.rows());
  for (int i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
  return v;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

inline long parse_long(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    require(used == s.size(), ErrorCode::kIoFailure, "trailing junk");
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::kIoFailure, "bad integer '" + s + "' for " + what);
  }
}

}  // namespace detail

// Builds a workload from a compact descriptor:
//   thresholds:T | parities:d,w | marginals:d,w | random_sign:k,N,seed |
//   identity:k | csv:path, optionally wrapped as sym+<descriptor> to
//   symmetrize the result.
inline Workload workload_from_descriptor(const std::string& desc) {
  if (desc.rfind("sym+", 0) == 0)
    return symmetrize(workload_from_descriptor(desc.substr(4)));
  const size_t colon = desc.find(':');
  require(colon != std::string::npos, ErrorCode::kIoFailure,
          "descriptor needs kind:args, got '" + desc + "'");
  const std::string kind = desc.substr(0, colon);
  const std::string rest = desc.substr(colon + 1);
  if (kind == "csv") {
    Workload w;
    w.name = desc;
    w.w = read_matrix_csv(rest);
    for (int i = 0; i < w.w.rows(); ++i)
      w.query_labels.push_back("q" + std::to_string(i));
    for (int j = 0; j < w.w.cols(); ++j)
      w.universe_labels.push_back("x" + std::to_string(j));
    return w;
  }
  const std::vector<std::string> args = detail::split(rest, ',');
  auto arg = [&](size_t i) {
    require(i < args.size(), ErrorCode::kIoFailure,
            "descriptor '" + desc + "' is missing arguments");
    return detail::parse_long(args[i], desc);
  };
  if (kind == "thresholds") {
    require(args.size() == 1, ErrorCode::kIoFailure, "thresholds:T");
    return thresholds(static_cast<int>(arg(0)));
  }
  if (kind == "parities") {
    require(args.size() == 2, ErrorCode::kIoFailure, "parities:d,w");
    return parities(static_cast<int>(arg(0)), static_cast<int>(arg(1)));
  }
  if (kind == "marginals") {
    require(args.size() == 2, ErrorCode::kIoFailure, "marginals:d,w");
    return marginals(static_cast<int>(arg(0)), static_cast<int>(arg(1)));
  }
  if (kind == "random_sign") {
    require(args.size() == 3, ErrorCode::kIoFailure, "random_sign:k,N,seed");
    return random_sign(static_cast<int>(arg(0)), static_cast<int>(arg(1)),
                       static_cast<uint64_t>(arg(2)));
  }
  if (kind == "identity") {
    require(args.size() == 1, ErrorCode::kIoFailure, "identity:k");
    const int k = static_cast<int>(arg(0));
    require(k >= 1 && k <= kMaxUniverse, ErrorCode::kIoFailure,
            "identity size");
    Workload w;
    w.name = desc;
    w.w = Matrix::identity(k);
    for (int i = 0; i < k; ++i) {
      w.query_labels.push_back("q" + std::to_string(i));
      w.universe_labels.push_back("x" + std::to_string(i));
    }
    return w;
  }
  fail(ErrorCode::kIoFailure, "unknown workload kind '" + kind + "'");
}

}  // namespace privfact

#endif  // PRIVFACT_IO_HPP_
