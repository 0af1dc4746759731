#pragma once

#include <stdexcept>
#include <string>

namespace pinchsec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (negative power, bad dimension, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Scenario fields outside their documented ranges.
class InvalidScenario : public Error {
 public:
  using Error::Error;
};

/// Geometry that makes a channel or a fine-tuning step undefined.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Bob and Eve present identical bearings to a PA, so the phase-alignment
/// step has no solution.
class DegenerateGeometry : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// No admissible fine-tuning step was found within the multiplier bound.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

/// The PAs cannot be placed on the waveguide under the spacing constraint.
class InfeasibleLayout : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel produced a non-finite value or lost feasibility.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or CSV input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pinchsec
