#pragma once

#include <stdexcept>
#include <string>

namespace qg {

/// Thrown when a computation hits a pole, resonance or other numerical
/// obstruction that is a property of the evaluation point, not of the
/// arguments' validity.  The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qg
