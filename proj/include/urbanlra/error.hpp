#pragma once

#include <stdexcept>
#include <string>

namespace urbanlra {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Input does not follow the declared file schema (header mismatch, bad JSON keys).
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Arguments violate an operation's preconditions.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An iterative routine stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace urbanlra
