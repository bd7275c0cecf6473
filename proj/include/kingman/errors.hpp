#pragma once

#include <stdexcept>
#include <string>

namespace kingman {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter (ν < 1, negative times, malformed grids).
struct DomainError : Error {
  using Error::Error;
};

// A quadrature, series or tail estimate did not meet its tolerance.
struct NonConvergent : Error {
  using Error::Error;
};

struct IllConditioned : Error {
  using Error::Error;
};

// A dilation or translation moved mass off the fixed grid.
struct ResampleError : Error {
  using Error::Error;
};

struct Instability : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace kingman
