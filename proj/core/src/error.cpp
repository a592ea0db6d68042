// Copyright 2026 The vidseek Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidseek/error.hpp"

namespace vidseek {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DuplicateSegment: return "DuplicateSegment";
    case Errc::UnknownSegment: return "UnknownSegment";
    case Errc::UnknownVideo: return "UnknownVideo";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::UnknownModality: return "UnknownModality";
    case Errc::EmptyStage: return "EmptyStage";
    case Errc::UnknownPrefix: return "UnknownPrefix";
    case Errc::DanglingPrefix: return "DanglingPrefix";
    case Errc::UnbalancedQuote: return "UnbalancedQuote";
    case Errc::IndexUnavailable: return "IndexUnavailable";
    case Errc::NonPositiveDuration: return "NonPositiveDuration";
    case Errc::ManifestInvalid: return "ManifestInvalid";
    case Errc::VectorCountMismatch: return "VectorCountMismatch";
    case Errc::NoVectors: return "NoVectors";
    case Errc::DegenerateMean: return "DegenerateMean";
    case Errc::TooFewVideos: return "TooFewVideos";
    case Errc::ClustersNotBuilt: return "ClustersNotBuilt";
    case Errc::MissingField: return "MissingField";
    case Errc::UpstreamRejected: return "UpstreamRejected";
    case Errc::UpstreamUnreachable: return "UpstreamUnreachable";
    case Errc::ConfigMissing: return "ConfigMissing";
    case Errc::InvalidRequest: return "InvalidRequest";
    case Errc::InternalError: return "InternalError";
  }
  return "InternalError";
}

}  // namespace vidseek
