// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#pragma once

#include <stdexcept>
#include <string>

namespace crowdbench {

enum class ErrorCode {
  InvalidArgument,
  Config,
  InsufficientPoints,
  InvalidWeights,
  PlacementFailure,
  SteppedTerminalEpisode,
  ExternalPolicyFailure,
  EmptyBatch,
  Io,
};

const char *error_code_name(ErrorCode code);

/// Base exception for every failure the library reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::PlacementFailure: return "PlacementFailure";
    case ErrorCode::SteppedTerminalEpisode: return "SteppedTerminalEpisode";
    case ErrorCode::ExternalPolicyFailure: return "ExternalPolicyFailure";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace crowdbench
