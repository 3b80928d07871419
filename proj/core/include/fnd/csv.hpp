// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace fnd::csv {

/// One parsed record and the 1-based physical line where it started.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// Streaming RFC 4180 reader. Accepts LF or CRLF line endings, quoted fields
/// with embedded separators, newlines and doubled quotes. A UTF-8 BOM at the
/// start of input is skipped. Malformed input raises Error{kParse} naming the
/// line.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Returns the next record, or nullopt at end of input.
  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  bool started_ = false;
};

/// Quotes a field when it contains a separator, quote, or line break.
std::string escape(const std::string& field);

}  // namespace fnd::csv
