#pragma once

#include <stdexcept>

namespace sentry {

/// Invalid argument to an operation (bad dimensions, out-of-range setting).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sentry
