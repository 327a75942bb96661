#pragma once

#include <stdexcept>
#include <string>

namespace pogd {

/// The optimal constant rate needs a positive final gradient energy.
class OracleUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An online rate was requested while the energy accumulator is still zero.
class RateUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation requires a set shape it did not get (e.g. per-coordinate
/// stepping on anything but a box).
class UnsupportedSetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A comparator request that cannot be met within the path budget.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Brute-force search request exceeds the desk-scale limits.
class SizeLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A stated precondition of a bound formula does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative numerics failed to converge; message carries the residual.
class NumericalFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration problem; message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pogd
