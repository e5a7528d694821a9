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

#ifndef PRIVFACT_ERRORS_HPP_
#define PRIVFACT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace privfact {

enum class ErrorCode {
  kDimensionTooLarge,
  kInvalidDistribution,
  kDimensionMismatch,
  kMaxIterations,
  kInfeasible,
  kSolverFailed,
  kZeroMatrix,
  kDegenerateWitness,
  kCertificateInvalid,
  kNotPowerOfTwo,
  kDeltaZero,
  kFullDimensionalityViolated,
  kNormTooLarge,
  kEpsilonNonpositive,
  kEmptyDataset,
  kNotSymmetric,
  kAnchorInvalid,
  kNotNormalized,
  kAsymmetricWitness,
  kNoInformativeBin,
  kDecompositionMissing,
  kAlreadySymmetric,
  kSearchExhausted,
  kIoFailure,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kSolverFailed: return "SolverFailed";
    case ErrorCode::kZeroMatrix: return "ZeroMatrix";
    case ErrorCode::kDegenerateWitness: return "DegenerateWitness";
    case ErrorCode::kCertificateInvalid: return "CertificateInvalid";
    case ErrorCode::kNotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::kDeltaZero: return "DeltaZero";
    case ErrorCode::kFullDimensionalityViolated:
      return "FullDimensionalityViolated";
    case ErrorCode::kNormTooLarge: return "NormTooLarge";
    case ErrorCode::kEpsilonNonpositive: return "EpsilonNonpositive";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kAnchorInvalid: return "AnchorInvalid";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kAsymmetricWitness: return "AsymmetricWitness";
    case ErrorCode::kNoInformativeBin: return "NoInformativeBin";
    case ErrorCode::kDecompositionMissing: return "DecompositionMissing";
    case ErrorCode::kAlreadySymmetric: return "AlreadySymmetric";
    case ErrorCode::kSearchExhausted: return "SearchExhausted";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

// All library failures throw this type; `code()` is stable API, the message
// is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " +
                           message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code,
                    const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace privfact

#endif  // PRIVFACT_ERRORS_HPP_
