#pragma once

#include <stdexcept>
#include <string>

namespace gapfuse {

// Two rasters (or subimages) that must share dimensions do not.
class ShapeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested pyramid depth exceeds what the image size supports.
class DepthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A grid file (or embedded grid text) could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration or generator parameter is out of its legal range.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A transform produced state that violates its own invariants
// (for example an inverse FFT whose imaginary residue is too large).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A file could not be opened, written, or renamed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gapfuse
