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

#include "blochfar/core.hpp"

namespace blochfar {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularEvaluation: return "SingularEvaluation";
    case ErrorCode::kNonconvergentQuadrature: return "NonconvergentQuadrature";
    case ErrorCode::kExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorCode::kSurfaceHitsSingularity: return "SurfaceHitsSingularity";
    case ErrorCode::kInadmissibleSurface: return "InadmissibleSurface";
    case ErrorCode::kDegenerateWavenumber: return "DegenerateWavenumber";
    case ErrorCode::kQuadratureFailure: return "QuadratureFailure";
    case ErrorCode::kRegularityViolation: return "RegularityViolation";
    case ErrorCode::kInconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::kZeroCurvature: return "ZeroCurvature";
    case ErrorCode::kTangentialCrossing: return "TangentialCrossing";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kOnActivityBoundary: return "OnActivityBoundary";
    case ErrorCode::kNotPerpendicular: return "NotPerpendicular";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kAtDegeneracy: return "AtDegeneracy";
    case ErrorCode::kOnQuadrantBoundary: return "OnQuadrantBoundary";
    case ErrorCode::kZeroRho: return "ZeroRho";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kDegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::kBlockMismatch: return "BlockMismatch";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kNoDoublePoint: return "NoDoublePoint";
    case ErrorCode::kNotElliptic: return "NotElliptic";
    case ErrorCode::kInstability: return "Instability";
    case ErrorCode::kMeshError: return "MeshError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMeshError:
    case ErrorCode::kIoError:
    case ErrorCode::kBlockMismatch:
      return ErrorClass::kConfig;
    case ErrorCode::kExtrapolationDiverged:
    case ErrorCode::kDegenerateWavenumber:
    case ErrorCode::kRegularityViolation:
    case ErrorCode::kInconsistentOrientation:
    case ErrorCode::kAtDegeneracy:
    case ErrorCode::kTangentialCrossing:
    case ErrorCode::kZeroRho:
    case ErrorCode::kNoDoublePoint:
    case ErrorCode::kNotElliptic:
      return ErrorClass::kDegeneracy;
    default:
      return ErrorClass::kNumerical;
  }
}

}  // namespace blochfar
