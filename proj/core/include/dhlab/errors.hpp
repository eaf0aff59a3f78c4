#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dhlab {

/// Failure category; the CLI maps each kind to its exit code.
enum class ErrorKind {
  Parse,          // malformed spec string or flag
  Precondition,   // violated operation precondition or integrability case
  NonConvergence  // numerical budget exhausted
};

/// Base error carrying the module and operation that failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation,
        const std::string& message)
      : std::runtime_error(module + "/" + operation + ": " + message),
        kind_(kind),
        module_(std::move(module)),
        operation_(std::move(operation)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
};

class ParseError : public Error {
 public:
  ParseError(std::string module, std::string operation, const std::string& message)
      : Error(ErrorKind::Parse, std::move(module), std::move(operation), message) {}
};

class PreconditionError : public Error {
 public:
  PreconditionError(std::string module, std::string operation, const std::string& message)
      : Error(ErrorKind::Precondition, std::move(module), std::move(operation), message) {}
};

/// Quadrature or iteration ran out of budget. achieved_error() is the best
/// error estimate reached before giving up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string module, std::string operation, const std::string& message,
                   double achieved_error)
      : Error(ErrorKind::NonConvergence, std::move(module), std::move(operation), message),
        achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace dhlab
