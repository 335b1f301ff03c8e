// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embrmt {

enum class ErrorKind {
  kSpecification,  // invalid ensemble parameters (e.g. beta not in {1,2,4})
  kDomain,         // argument outside the mathematical domain of an operation
  kCapacity,       // dimension exceeds what can be represented or stored
  kConfig,         // invalid run configuration
  kNumerical,      // eigensolve or unfolding failure
  kIo,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& what) : Error(ErrorKind::kSpecification, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(ErrorKind::kCapacity, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::kNumerical, what) {}
};

/// Raised when a fitted cumulative density is not monotone over the data.
/// Callers can retry with a larger edge trim.
class UnfoldingError : public NumericalError {
 public:
  explicit UnfoldingError(const std::string& what) : NumericalError(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

/// Wraps a failure inside one ensemble member so the run can report which
/// member aborted it. Keeps the kind of the underlying error.
class MemberError : public Error {
 public:
  MemberError(std::size_t member, ErrorKind kind, const std::string& what)
      : Error(kind, "member " + std::to_string(member) + ": " + what), member_(member) {}
  std::size_t member() const noexcept { return member_; }

 private:
  std::size_t member_;
};

}  // namespace embrmt
