// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#include "fnd/csv.hpp"

#include "fnd/error.hpp"

namespace fnd::csv {

namespace {

constexpr int kEof = std::char_traits<char>::eof();

}  // namespace

std::optional<Record> Reader::next() {
  if (!started_) {
    started_ = true;
    if (in_.peek() == 0xEF) {
      char bom[3] = {};
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB &&
            static_cast<unsigned char>(bom[2]) == 0xBF)) {
        throw Error(ErrorKind::kParse, "line 1: invalid byte order mark");
      }
    }
  }
  if (in_.peek() == kEof) return std::nullopt;

  Record record;
  record.line = line_;
  std::string field;
  enum class State { kFieldStart, kUnquoted, kQuoted, kQuoteInQuoted } state = State::kFieldStart;

  for (;;) {
    const int c = in_.get();
    switch (state) {
      case State::kFieldStart:
      case State::kUnquoted:
        if (c == kEof || c == '\n') {
          if (c == '\n') ++line_;
          record.fields.push_back(std::move(field));
          return record;
        }
        if (c == '\r') {
          if (in_.peek() == '\n') in_.get();
          ++line_;
          record.fields.push_back(std::move(field));
          return record;
        }
        if (c == ',') {
          record.fields.push_back(std::move(field));
          field.clear();
          state = State::kFieldStart;
        } else if (c == '"') {
          if (state != State::kFieldStart) {
            throw Error(ErrorKind::kParse, "line " + std::to_string(line_) +
                                               ": quote inside unquoted field");
          }
          state = State::kQuoted;
        } else {
          field.push_back(static_cast<char>(c));
          state = State::kUnquoted;
        }
        break;
      case State::kQuoted:
        if (c == kEof) {
          throw Error(ErrorKind::kParse, "line " + std::to_string(record.line) +
                                             ": unterminated quoted field");
        }
        if (c == '"') {
          state = State::kQuoteInQuoted;
        } else {
          if (c == '\n') ++line_;
          field.push_back(static_cast<char>(c));
        }
        break;
      case State::kQuoteInQuoted:
        if (c == '"') {
          field.push_back('"');
          state = State::kQuoted;
        } else if (c == ',') {
          record.fields.push_back(std::move(field));
          field.clear();
          state = State::kFieldStart;
        } else if (c == '\n' || c == kEof) {
          if (c == '\n') ++line_;
          record.fields.push_back(std::move(field));
          return record;
        } else if (c == '\r') {
          if (in_.peek() == '\n') in_.get();
          ++line_;
          record.fields.push_back(std::move(field));
          return record;
        } else {
          throw Error(ErrorKind::kParse, "line " + std::to_string(line_) +
                                             ": unexpected character after closing quote");
        }
        break;
    }
  }
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace fnd::csv
