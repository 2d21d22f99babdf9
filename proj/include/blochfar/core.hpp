// Copyright 2026 Blochfar Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blochfar {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kSingularEvaluation = 10,
  kNonconvergentQuadrature = 11,
  kExtrapolationDiverged = 12,
  kSurfaceHitsSingularity = 13,
  kInadmissibleSurface = 14,
  kDegenerateWavenumber = 15,
  kQuadratureFailure = 16,
  kRegularityViolation = 20,
  kInconsistentOrientation = 21,
  kZeroCurvature = 22,
  kTangentialCrossing = 23,
  kUnsupported = 24,
  kOnActivityBoundary = 30,
  kNotPerpendicular = 31,
  kDomainError = 40,
  kAtDegeneracy = 41,
  kOnQuadrantBoundary = 42,
  kZeroRho = 43,
  kInvalidModel = 44,
  kDegenerateTriangle = 50,
  kBlockMismatch = 51,
  kSolverFailure = 52,
  kNoDoublePoint = 53,
  kNotElliptic = 54,
  kInstability = 55,
  kMeshError = 56,
  kIoError = 60,
};

const char* error_name(ErrorCode code);

// Coarse classes used by the CLI to pick an exit code.
enum class ErrorClass { kConfig, kDegeneracy, kNumerical };
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace blochfar
