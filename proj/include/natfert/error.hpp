#pragma once

#include <stdexcept>
#include <string>

namespace natfert {

inline constexpr const char* kVersion = "0.1.0";

// Base class for all library failures. Pipeline and simulation errors stay
// on this type; configuration and input-data problems get their own classes
// so the CLI can map them to distinct exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

}  // namespace natfert
