// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankfuse {

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail),
        line_(line),
        detail_(detail) {}

  /// Same error, reported as `source:line: detail`.
  ParseError(const std::string& source, const ParseError& inner)
      : std::runtime_error(source + ":" + std::to_string(inner.line_) + ": " + inner.detail_),
        line_(inner.line_),
        detail_(inner.detail_) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Well-formed input that violates a data invariant (duplicates, missing
/// weights, empty inputs, dimension mismatches).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rankfuse
