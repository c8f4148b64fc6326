#pragma once

#include <stdexcept>
#include <string>

namespace cslab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyPolytope : public Error {
 public:
  EmptyPolytope() : Error("polytope is empty") {}
};

class TooManyConstraints : public Error {
 public:
  explicit TooManyConstraints(std::size_t n)
      : Error("too many halfspaces after pruning: " + std::to_string(n)) {}
};

class DimensionTooLarge : public Error {
 public:
  DimensionTooLarge(int d, int dmax)
      : Error("dimension " + std::to_string(d) + " exceeds vertex-mode limit " +
              std::to_string(dmax)) {}
};

class SliceOutOfRange : public Error {
 public:
  SliceOutOfRange(double p, double lo, double hi)
      : Error("slice position " + std::to_string(p) + " outside [" + std::to_string(lo) +
              ", " + std::to_string(hi) + "]") {}
};

class EstimatorFailure : public Error {
 public:
  using Error::Error;
};

class BadDimension : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cslab
