#pragma once

#include <stdexcept>
#include <string>

namespace gieseker {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition does not hold: a non-unit was inverted, no
/// primitive root exists in the field, a series violates a support
/// condition, and so on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (JSON payloads, CLI arguments). `path` is a JSON
/// pointer to the offending field when one is known.
class InputError : public Error {
 public:
  InputError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)), message_(message) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

/// An identity that must hold by construction was found to fail.
class CheckFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace gieseker
