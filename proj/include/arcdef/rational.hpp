#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>

namespace arcdef {

// Exact rational coefficients. cpp_rational keeps gcd(|num|,den)=1 and den>0
// canonically, which the printers rely on.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an operation would need a coefficient beyond declared precision.
struct PrecisionError : DomainError {
  using DomainError::DomainError;
};

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

}  // namespace arcdef
