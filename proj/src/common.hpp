#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cylspec {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

enum class ErrorCode {
  InvalidArgument = 1,
  Configuration = 2,
  Domain = 3,
  Threshold = 4,
  Contract = 5,
  Parameter = 6,
  Numeric = 7,
  Resource = 8,
  InsufficientData = 9,
  PropertyViolation = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace cylspec
