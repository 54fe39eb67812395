#pragma once

#include <stdexcept>
#include <string>

namespace ssod {

// Invalid user-facing configuration or flags. The CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed persisted artifact (dataset, checkpoint, log).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime failure inside a training loop (non-finite loss, write failure).
struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ssod
