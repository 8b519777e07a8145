#pragma once

#include <stdexcept>
#include <string>

namespace ier {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AsymmetryError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a statistic is asked for with too few samples per population.
class SampleSizeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A positive numerator over a vanishing denominator in a 0/0-convention ratio.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// The dense symmetric eigensolver reported failure.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The iterative spectral solver ran out of iterations. Non-fatal by
/// convention: callers may fall back on the carried estimate.
class NoConvergence : public Error {
 public:
  NoConvergence(double best_estimate, int iterations)
      : Error("operator norm iteration did not converge after " +
              std::to_string(iterations) + " iterations"),
        best_estimate_(best_estimate),
        iterations_(iterations) {}

  double best_estimate() const noexcept { return best_estimate_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_estimate_;
  int iterations_;
};

class TooLargeToEnumerate : public Error {
 public:
  using Error::Error;
};

class DivergentChiSquare : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration (sweep JSON, families, trial specs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file contents. Carries a message naming the offending cell.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ier
