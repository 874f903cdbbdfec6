#pragma once

#include <stdexcept>
#include <string>

namespace oeem {

/// Base error carrying a stable process exit code for the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& msg, int exit_code)
      : std::runtime_error(msg), name_(std::move(name)), exit_code_(exit_code) {}
  const std::string& name() const { return name_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string name_;
  int exit_code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("ConfigError", msg, 2) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("IoError", msg, 3) {}
};

/// Bias field below the validity threshold of the strong-field spin model.
struct ZeroFieldError : Error {
  explicit ZeroFieldError(const std::string& msg) : Error("ZeroField", msg, 4) {}
};

struct ZeroDistanceError : Error {
  explicit ZeroDistanceError(const std::string& msg) : Error("ZeroDistance", msg, 5) {}
};

struct FitFailureError : Error {
  explicit FitFailureError(const std::string& msg) : Error("FitFailure", msg, 6) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& msg) : Error("InsufficientData", msg, 7) {}
};

}  // namespace oeem
