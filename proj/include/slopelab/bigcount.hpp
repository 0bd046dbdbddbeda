#pragma once

// Application counters. Transits of the later regions take far more than 2^64
// map applications, so counts are arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "slopelab/xnum.hpp"

namespace slopelab {

using BigInt = boost::multiprecision::cpp_int;

/// Exact conversion of a non-negative integral XReal.
BigInt to_bigint(const XReal& v);

/// Nearest XReal (truncates to 53 significant bits).
XReal to_xreal(const BigInt& n);

/// Parses "12345", "1e40" or "3e100000" (integer mantissa times a power of ten).
BigInt parse_count(const std::string& text);

std::string to_string(const BigInt& n);

}  // namespace slopelab
