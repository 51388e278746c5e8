#pragma once

#include <stdexcept>
#include <string>

namespace structdist {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: shape mismatch, NaN, invalid indicator, non-stochastic rows.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested inference operation is not available for this family.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// No structure has a finite score.
class VacuousDistribution : public Error {
 public:
  VacuousDistribution() : Error("vacuous distribution: no structure has finite score") {}
  using Error::Error;
};

/// Wilson's walk exceeded its step budget (near-degenerate weights).
class SamplerStepLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace structdist
