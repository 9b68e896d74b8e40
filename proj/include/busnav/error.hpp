// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace busnav {

enum class ErrorCode {
  EmptyInput,
  InvalidParameter,
  DegenerateCluster,
  DegenerateDirection,
  BelowHorizonBoundary,
  InvalidElevation,
  InvalidWeight,
  SingularGeometry,
  ParseError,
  SchemaError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

  // Input/schema problems map to CLI exit code 2, everything else to 1.
  bool is_input_error() const {
    return code_ == ErrorCode::ParseError || code_ == ErrorCode::SchemaError ||
           code_ == ErrorCode::InvalidParameter;
  }

 private:
  ErrorCode code_;
};

}  // namespace busnav
