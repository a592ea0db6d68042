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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vidseek {

/// Every failure the engine reports carries one of these codes. The names are
/// part of the wire protocol (see docs/protocol.md) and must stay stable.
enum class Errc {
  // embedding-index
  ZeroVector,
  DimensionMismatch,
  DuplicateSegment,
  UnknownSegment,
  // metadata-store
  UnknownVideo,
  InvariantViolation,
  UnknownModality,
  // query-language
  EmptyStage,
  UnknownPrefix,
  DanglingPrefix,
  UnbalancedQuote,
  // orchestrator
  IndexUnavailable,
  // catalog-ingest
  NonPositiveDuration,
  ManifestInvalid,
  VectorCountMismatch,
  // explore
  NoVectors,
  DegenerateMean,
  TooFewVideos,
  ClustersNotBuilt,
  // eval-client
  MissingField,
  UpstreamRejected,
  UpstreamUnreachable,
  ConfigMissing,
  // gateway
  InvalidRequest,
  InternalError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parser failure with the character offset (bytes from the start of the
/// input) of the token that triggered it.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& message)
      : Error(code, message), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// The evaluation server answered with an HTTP error status.
class UpstreamRejected : public Error {
 public:
  UpstreamRejected(int status, std::string body)
      : Error(Errc::UpstreamRejected,
              "evaluation server rejected submission with status " +
                  std::to_string(status)),
        status_(status),
        body_(std::move(body)) {}

  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

}  // namespace vidseek
