#pragma once

#include <stdexcept>
#include <string>

namespace decopt {

// Base for every error the library raises. The CLI maps IoError to exit
// code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A gossip matrix, parameter set or iterate failed a structural check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Iterative procedure did not reach its tolerance or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace decopt
