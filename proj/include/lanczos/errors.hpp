#pragma once

#include <stdexcept>
#include <string>

namespace lanczos {

/// Operand shapes do not agree (vector lengths, matrix dimensions).
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A kernel produced (or was handed) a NaN or an infinity.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation invoked on an object in the wrong lifecycle state,
/// e.g. stepping a solver that already terminated.
class state_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Dense elimination met a zero pivot.
class singular_matrix_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or configuration.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lanczos
