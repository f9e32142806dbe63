#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ulab {

// Base of every error the library raises. Callers that only need a message
// can catch this; the CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A configuration value is missing, unknown or out of range. `violations`
// holds one "key.path: message" entry per problem found.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(message), violations_{message} {}
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

// A configured resource cap (class size, stream horizon, ...) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// The predict/feed protocol of an online rule was not followed.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A numerical computation produced no usable result (e.g. all weights vanished).
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ulab
