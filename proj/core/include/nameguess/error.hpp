#pragma once

#include <stdexcept>
#include <string>

namespace nameguess {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid configuration, violated
/// preconditions. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t row)
      : InputError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class EmptyTableError : public InputError {
 public:
  using InputError::InputError;
};

class DecodeError : public InputError {
 public:
  using InputError::InputError;
};

/// Network-level failure talking to a remote service. `status` is the last
/// HTTP status seen, or 0 when no response arrived.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status)
      : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class EndpointError : public TransportError {
 public:
  using TransportError::TransportError;
};

class ClassificationError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace nameguess
