#pragma once

#include <stdexcept>
#include <string>

namespace netbreak {

/// File could not be opened, read or written. The message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds a brute-force enumeration limit.
class LimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed edge-list fixture.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netbreak
