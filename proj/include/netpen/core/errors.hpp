#pragma once

#include <stdexcept>
#include <string>

namespace netpen {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class GimbalLock : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class SingularAllocation : public Error {
 public:
  using Error::Error;
};

class NoPathFound : public Error {
 public:
  using Error::Error;
};

/// Malformed plan or scenario document. `location()` names the offending
/// element, e.g. "ROV2.Plan[3]".
class SchemaError : public Error {
 public:
  SchemaError(std::string location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class BackendTimeout : public Error {
 public:
  using Error::Error;
};

class ChannelClosed : public Error {
 public:
  using Error::Error;
};

class NegotiationDivergence : public Error {
 public:
  using Error::Error;
};

}  // namespace netpen
