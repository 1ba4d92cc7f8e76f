#pragma once

#include <stdexcept>
#include <string>

namespace opmean {

// Root of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands whose dimensions do not agree.
class shape_error : public error {
 public:
  using error::error;
};

// A value outside the admissible domain: non-finite entries, asymmetric
// input, a matrix that fails SPD certification, a function that is not
// finite on the spectrum.
class domain_error : public error {
 public:
  using error::error;
};

// The Jacobi eigensolver hit its sweep cap.
class solver_failure : public error {
 public:
  using error::error;
};

// Malformed user input (files, flags, check names).
class input_error : public error {
 public:
  using error::error;
};

}  // namespace opmean
