#pragma once

#include <stdexcept>
#include <string>

namespace bbcirl {

enum class ErrorCategory { config, usage, io, numeric, internal };

inline const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::io: return "io";
    case ErrorCategory::numeric: return "numeric";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& msg)
      : std::runtime_error(msg), category_(category) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(ErrorCategory::config, msg) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error(ErrorCategory::usage, msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCategory::io, msg) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(ErrorCategory::numeric, msg) {}
};

}  // namespace bbcirl
