#pragma once

#include <stdexcept>
#include <string>

namespace qcomb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physics or contract violation: bad parameters, unresolved grids,
/// degenerate states. Maps to exit status 1 in the CLI.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File system and data-source failures. Maps to exit status 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcomb
