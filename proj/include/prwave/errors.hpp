#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace prwave {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexical or syntactic failure; `offset` is a byte position into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected = {})
      : Error(message + " (at byte " + std::to_string(offset) + ")"),
        offset(offset),
        expected(std::move(expected)) {}

  std::size_t offset;
  std::vector<std::string> expected;
};

class MissingParameterError : public Error {
 public:
  MissingParameterError(const std::string& message, std::vector<std::string> names)
      : Error(message), names(std::move(names)) {}

  std::vector<std::string> names;
};

/// A field was evaluated outside its analytic domain (log of a nonpositive
/// value, division by zero, ...). Carries the offending point when known.
class EvalDomainError : public Error {
 public:
  explicit EvalDomainError(const std::string& message) : Error(message) {}
  EvalDomainError(const std::string& message, const Eigen::Vector4d& p)
      : Error(message), point(p) {}

  std::optional<Eigen::Vector4d> point;
};

class NonpositiveDensityError : public EvalDomainError {
 public:
  using EvalDomainError::EvalDomainError;
};

class SingularMetricError : public EvalDomainError {
 public:
  using EvalDomainError::EvalDomainError;
};

class ZeroCurvatureError : public Error {
 public:
  using Error::Error;
};

/// Family constructor preconditions (parameter inequalities etc.).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class OdeStepUnderflow : public Error {
 public:
  OdeStepUnderflow(const std::string& message, double t) : Error(message), t(t) {}
  double t;
};

}  // namespace prwave
