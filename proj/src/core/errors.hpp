// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riskbandit {

enum class ErrorKind {
  Domain,
  Config,
  Parse,
  Integrity,
  UnsupportedMetric,
  Numerical,
  Io,
  InvariantViolation,
  DegenerateRun,
};

/// Base of every exception thrown by the core. The C API maps `kind()` onto
/// `rb_status` codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Invalid experiment configuration. `field()` is a dotted path such as
/// `environment.x_star[1]`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(ErrorKind::Config, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error(ErrorKind::Integrity, what) {}
};

class UnsupportedMetricError : public Error {
 public:
  explicit UnsupportedMetricError(const std::string& what)
      : Error(ErrorKind::UnsupportedMetric, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(ErrorKind::Io, path + ": " + what) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorKind::InvariantViolation, what) {}
};

}  // namespace riskbandit
