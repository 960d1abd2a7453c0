#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acsplit {

/// Broad failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  InvalidArgument,
  InvalidOmega,
  Divergence,
  ConvergenceFailure,
  ZeroReference,
  FieldFormat,
  Io,
};

const char* to_string(ErrorCategory category) noexcept;

/// CLI exit status: 2 + ordinal, so 2 (invalid argument) through 8 (I/O).
/// 1 is left for unexpected failures.
constexpr int exit_code(ErrorCategory category) noexcept { return 2 + static_cast<int>(category); }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::InvalidArgument, what) {}
};

/// Raised for an omega outside a family's admissible set. `singular_point`
/// names the offending location (e.g. "1/3", "D<0").
class InvalidOmega : public Error {
 public:
  InvalidOmega(double omega, std::string singular_point);

  double omega() const noexcept { return omega_; }
  const std::string& singular_point() const noexcept { return singular_point_; }

 private:
  double omega_;
  std::string singular_point_;
};

/// Blow-up of the state, either a non-positive radicand in the free-energy
/// flow or the solver's |phi| guard. `cell` is the first offending linear index.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t cell, const std::string& what)
      : Error(ErrorCategory::Divergence, what), cell_(cell) {}

  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& what)
      : Error(ErrorCategory::ConvergenceFailure, what) {}
};

class ZeroReference : public Error {
 public:
  ZeroReference() : Error(ErrorCategory::ZeroReference, "reference field has zero l2 norm") {}
};

class FieldFormatError : public Error {
 public:
  explicit FieldFormatError(const std::string& what)
      : Error(ErrorCategory::FieldFormat, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

}  // namespace acsplit
