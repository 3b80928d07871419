// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fnd {

enum class ErrorKind {
  kIo,
  kSchema,
  kParse,
  kPrecondition,
  kDomain,
  kTraining,
  kConvergence,
  kCalibration,
  kConfig,
  kFormat,
  kVersion,
  kCorruption,
  kPipeline,
  kUnsupported,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. Callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by iterative solvers; carries the state reached when the iteration
/// budget ran out.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double objective,
                   double max_violation)
      : Error(ErrorKind::kConvergence, message),
        objective_(objective),
        max_violation_(max_violation) {}

  double objective() const noexcept { return objective_; }
  double max_violation() const noexcept { return max_violation_; }

 private:
  double objective_;
  double max_violation_;
};

}  // namespace fnd
