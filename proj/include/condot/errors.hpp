#pragma once

#include <stdexcept>
#include <string>

namespace condot {

// All library errors derive from Error and carry the process exit code the
// CLI maps them to: 2 = bad input, 3 = solver failure, 4 = invariant violation.
class Error : public std::runtime_error {
public:
  Error(std::string what, int exit_code)
      : std::runtime_error(std::move(what)), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

private:
  int exit_code_;
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what, 2) {}
};

class InvalidWeights : public Error {
public:
  explicit InvalidWeights(const std::string& what) : Error("invalid weights: " + what, 2) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what, 2) {}
};

class EmptyInput : public Error {
public:
  explicit EmptyInput(const std::string& what) : Error("empty input: " + what, 2) {}
};

class DegenerateInput : public Error {
public:
  explicit DegenerateInput(const std::string& what) : Error("degenerate input: " + what, 2) {}
};

class InvalidDelta : public Error {
public:
  explicit InvalidDelta(const std::string& what) : Error("invalid delta: " + what, 2) {}
};

class InvalidEpsilon : public Error {
public:
  explicit InvalidEpsilon(const std::string& what) : Error("invalid epsilon: " + what, 2) {}
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error("invalid argument: " + what, 2) {}
};

class Overflow : public Error {
public:
  explicit Overflow(const std::string& what) : Error("overflow: " + what, 2) {}
};

class SolverFailure : public Error {
public:
  explicit SolverFailure(const std::string& what) : Error("solver failure: " + what, 3) {}
};

class CertificateFailure : public Error {
public:
  explicit CertificateFailure(const std::string& what)
      : Error("certificate failure: " + what, 4) {}
};

class InvariantViolation : public Error {
public:
  explicit InvariantViolation(const std::string& what)
      : Error("invariant violation: " + what, 4) {}
};

}  // namespace condot
