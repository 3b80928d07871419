// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/error.hpp"

namespace fnd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kIo: return "io";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kTraining: return "training";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kCalibration: return "calibration";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kVersion: return "version";
    case ErrorKind::kCorruption: return "corruption";
    case ErrorKind::kPipeline: return "pipeline";
    case ErrorKind::kUnsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace fnd
