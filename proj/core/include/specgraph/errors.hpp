#pragma once

#include <stdexcept>
#include <string>

namespace specgraph {

/// Error category, mapped to CLI exit codes (input=2, numerical=3, config=4).
enum class ErrorKind { Input, Numerical, Config };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  InputError(const std::string& module, const std::string& message)
      : Error(ErrorKind::Input, module, message) {}
};

/// Singularity, rank-deficiency, rejection-budget and similar failures.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& module, const std::string& message)
      : Error(ErrorKind::Numerical, module, message) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& module, const std::string& message)
      : Error(ErrorKind::Config, module, message) {}
};

}  // namespace specgraph
