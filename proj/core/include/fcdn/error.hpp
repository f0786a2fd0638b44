#pragma once

#include <stdexcept>
#include <string>

namespace fcdn {

/// Raised for every contract violation the library detects: malformed input
/// documents, infeasible parameters, disconnected graphs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fcdn
