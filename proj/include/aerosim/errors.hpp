#pragma once

#include <stdexcept>
#include <string>

namespace aerosim {

/// Scenario/channel document or parameter violates an invariant. Messages
/// carry the path of the offending field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure; message carries the path involved.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aerosim
