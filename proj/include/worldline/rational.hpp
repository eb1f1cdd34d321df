#pragma once

// Exact rational scalar usable inside Eigen vectors.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <string>
#include <type_traits>

namespace worldline {

using Rational = boost::multiprecision::cpp_rational;

template <typename Scalar>
inline constexpr bool is_exact_v = !std::is_floating_point_v<Scalar>;

/// Parses "p/q", "p" or a decimal literal; decimals are taken as their exact
/// binary value.
Rational parse_rational(const std::string& text);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return static_cast<double>(x); }

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

}  // namespace worldline
