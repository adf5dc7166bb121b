#pragma once

#include <stdexcept>
#include <string>

namespace drsim {

// Bad scenario input: unreadable file, schema violation, infeasible spec.
// The message carries the offending field path or class name.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant (never user input). Surfaced, never swallowed.
class ModelError : public std::logic_error {
  public:
    explicit ModelError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace drsim
