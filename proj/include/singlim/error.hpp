#pragma once

#include <stdexcept>
#include <string>

namespace singlim {

/// Raised when an iterative numerical method fails to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed run configuration; carries the 1-based line number (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

} // namespace singlim
