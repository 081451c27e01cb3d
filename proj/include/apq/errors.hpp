#pragma once

#include <stdexcept>
#include <string>

namespace apq {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMesh : Error { using Error::Error; };
struct NumericFailure : Error { using Error::Error; };
struct ZeroWeight : Error { using Error::Error; };
struct InvalidWeight : Error { using Error::Error; };
struct InvalidEigenvalue : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct LineSearchFailure : Error { using Error::Error; };
struct TrivialSolution : Error { using Error::Error; };
struct OrderingViolation : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

} // namespace apq
