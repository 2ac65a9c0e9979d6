#pragma once

#include <stdexcept>
#include <string>

namespace ginv {

// Base of every error thrown by the library. Callers that only need to
// report a failure can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

class ExhaustedRetriesError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// A swap whose Cramer ratio is zero would make the block singular.
class DegenerateSwapError : public Error {
 public:
  using Error::Error;
};

class ZeroPivotError : public Error {
 public:
  using Error::Error;
};

// Candidate column is not in the range of the current column block.
class RangeViolationError : public Error {
 public:
  using Error::Error;
};

// P2 verdict and rank verdict disagree; usually a rank-tolerance problem.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MissingObjectiveError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Refused because the problem exceeds a configured size limit.
class SizeLimitError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ginv
