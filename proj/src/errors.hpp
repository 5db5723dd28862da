#pragma once

#include <stdexcept>
#include <string>

namespace flip {

// Base class for everything thrown by the library.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad model/config/input data. The message names the offending key or field.
struct config_error : error {
  explicit config_error(const std::string& what) : error(what) {}
};

// Numerical failure (singular V block, non-PSD input, non-convergence).
struct numeric_error : error {
  explicit numeric_error(const std::string& what) : error(what) {}
};

}  // namespace flip
