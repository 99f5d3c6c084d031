#pragma once

#include <stdexcept>
#include <string>

namespace apc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integer window or index falls outside the supported range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A parameter violates an operation precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (e.g. the singular series at h = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Floating-point rounding guard tripped; callers fall back to an exact path.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// An exact identity that must hold did not.
class IdentityError : public Error {
 public:
  using Error::Error;
};

/// Malformed cache file (bad magic, short header, unknown payload kind).
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

class ChecksumError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace apc
