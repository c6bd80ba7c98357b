#pragma once

#include <stdexcept>
#include <string>

namespace zipshoe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symbol was used with the wrong alphabet or is unknown.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters or malformed configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside of its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the region where an inverse branch is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A point left the union of the vertical strips while being iterated.
class EscapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The perturbation amplitude is too large to recover the strip structure.
class PerturbationTooLarge : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zipshoe
