#pragma once

#include <stdexcept>
#include <string>

namespace tsed {

/// A bad flag, missing column, unreadable or inconsistent input. The CLI maps
/// these to exit code 2; anything else escaping a command is an internal error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An on-disk artifact failed validation (bad magic, checksum, truncation).
class FormatError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace tsed
