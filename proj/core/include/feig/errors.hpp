#pragma once

#include <stdexcept>
#include <string>

namespace feig {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class BadCriticality : public Error {
 public:
  using Error::Error;
};

/// The requested point is outside every domain the evaluator knows how to reach.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// An inverse-branch continuation landed on the wrong sheet.
class BranchLoss : public Error {
 public:
  using Error::Error;
};

class NotCovered : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InsufficientResolution : public Error {
 public:
  using Error::Error;
};

class InsufficientDepth : public Error {
 public:
  using Error::Error;
};

class NoBracket : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace feig
