#pragma once

#include <stdexcept>
#include <string>

namespace roadcov {

/// Invalid model or configuration input.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical sub-evaluation failed (quadrature budget, divergent tail, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A snapshot kept coming back degenerate after the retry cap.
class ResampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace roadcov
