#pragma once

#include <stdexcept>
#include <string>

namespace rtdforge {

// Error taxonomy mirrors the CLI exit codes: config (2), io (3), validation (4).

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rtdforge
