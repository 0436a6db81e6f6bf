#pragma once

#include <stdexcept>
#include <string>

namespace nsv {

// Grid too small or badly specified for the requested operation.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fields that do not live on the same grid / sample locations.
class InconsistentFieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NSF1 payload could not be decoded.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsv
