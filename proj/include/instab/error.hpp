#pragma once

#include <stdexcept>
#include <string>

namespace instab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (out-of-range parameter, mismatched inputs).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical solver failed to reach its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Invalid experiment configuration; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace instab
