#pragma once

#include <stdexcept>
#include <string>

namespace tadkit {

// Raised for invalid inputs: malformed files, contract violations, bad config.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tadkit
