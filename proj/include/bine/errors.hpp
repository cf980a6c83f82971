// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bine {

/// Raised when a rank count, variant or size is outside what an algorithm supports
/// (for instance a Bine schedule over a non-power-of-two number of ranks).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A schedule that cannot be executed as written.
class ScheduleDefect : public std::runtime_error {
 public:
  ScheduleDefect(std::size_t step, std::size_t transfer, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ", transfer " +
                           std::to_string(transfer) + ": " + what),
        step_(step),
        transfer_(transfer) {}

  std::size_t step() const noexcept { return step_; }
  std::size_t transfer() const noexcept { return transfer_; }

 private:
  std::size_t step_;
  std::size_t transfer_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bine
