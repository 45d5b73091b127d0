#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ncsched {

// Exact arithmetic for the golden paths. Every double converts exactly.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double v) { return v; }

inline Rational to_rational(double v) { return Rational(v); }

// "n/d" or "n" for integers.
inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace ncsched
