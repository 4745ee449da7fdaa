#pragma once

#include <stdexcept>
#include <string>

namespace volvol {

// Base for all failures this library raises on top of std::invalid_argument
// (which is reserved for plain precondition violations).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data could not be parsed or failed validation (CSV ingestion).
class IngestError : public Error {
 public:
  using Error::Error;
};

// The estimated limiting variance C-hat came out non-positive, so the
// feasible standardized statistic is undefined for this sample.
class NonPositiveVariance : public Error {
 public:
  using Error::Error;
};

// The hypothesized variance-of-variance function is identically zero on the
// sample (D-hat = 0), so the projection coefficient is undefined.
class DegenerateDesign : public Error {
 public:
  using Error::Error;
};

// No grid point had a usable studentizer (all s2-hat values at or below the
// variance floor), so the sup statistic is undefined.
class DegenerateStudentization : public Error {
 public:
  using Error::Error;
};

// The projection coefficient theta-hat was non-positive, so no bootstrap
// volatility-of-volatility scale can be formed; the test aborts.
class BootstrapDegenerate : public Error {
 public:
  using Error::Error;
};

}  // namespace volvol
