#ifndef STABLEKERN_UTIL_ERROR_HPP
#define STABLEKERN_UTIL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stablekern {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration / input files.  CLI maps this to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A stated precondition does not hold (inadmissible selection, gamma out of range,
// unsupported domain, ...).  The operation refuses to run.  CLI maps this to exit code 3.
class PreconditionError : public Error {
public:
  using Error::Error;
};

// A quadrature or series evaluation could not reach the requested tolerance.
// Carries the best estimate and the achieved error bound as diagnostics.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate(estimate), error_estimate(error_estimate) {}
  double estimate;
  double error_estimate;
};

}  // namespace stablekern

#endif
