#pragma once

#include <stdexcept>
#include <string>

namespace cocyclelab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- linear algebra --------------------------------------------------------

struct InvalidMatrix : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};
struct InvalidOrder : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};

// -- base dynamics ----------------------------------------------------------

struct WindowExhausted : Error {
  using Error::Error;
};
struct WordTooLong : Error {
  using Error::Error;
};
struct NotEnumerable : Error {
  using Error::Error;
};

// -- cocycles ---------------------------------------------------------------

struct SingularGenerator : Error {
  using Error::Error;
};
struct SingularConjugacy : Error {
  using Error::Error;
};

// -- diagnostics ------------------------------------------------------------

struct NotPeriodic : Error {
  using Error::Error;
};
struct EmptySample : Error {
  using Error::Error;
};
struct SplittingUnresolved : Error {
  using Error::Error;
};
struct InvalidSpectrumShape : Error {
  using Error::Error;
};
struct InvalidParameter : Error {
  using Error::Error;
};

}  // namespace cocyclelab
