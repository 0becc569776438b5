#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rootcause {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A graph that must be acyclic is not. Carries one edge that lies on a cycle.
class CycleError : public Error {
 public:
  CycleError(int from, int to)
      : Error("graph contains a cycle through edge " + std::to_string(from) + "->" +
              std::to_string(to)),
        edge_(from, to) {}

  std::pair<int, int> edge() const { return edge_; }

 private:
  std::pair<int, int> edge_;
};

/// Floating point breakdown (overflow, non-finite values).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// sI - A*A left the M-matrix domain of the log-determinant constraint.
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class AggregationError : public Error {
 public:
  using Error::Error;
};

/// Two graphs cannot be compared (size or label mismatch).
class ComparisonError : public Error {
 public:
  using Error::Error;
};

/// phi is undefined because one of the columns is constant.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rootcause
