#include "slopelab/bigcount.hpp"

#include <cmath>
#include <cstdint>

#include "slopelab/error.hpp"

namespace slopelab {

BigInt to_bigint(const XReal& v) {
  if (v.sign() < 0) throw DomainError("to_bigint: negative value");
  if (v.is_zero()) return 0;
  if (v.floor() != v) throw DomainError("to_bigint: non-integral value");
  // 53-bit integer mantissa, then shift.
  auto m = static_cast<std::int64_t>(std::ldexp(v.mantissa(), 52));
  BigInt n = m;
  std::int64_t shift = v.exp2() - 52;
  if (shift >= 0) {
    n <<= static_cast<unsigned>(shift);
  } else {
    n >>= static_cast<unsigned>(-shift);
  }
  return n;
}

XReal to_xreal(const BigInt& n) {
  if (n == 0) return {};
  bool neg = n < 0;
  BigInt a = neg ? BigInt(-n) : n;
  auto bits = static_cast<std::int64_t>(boost::multiprecision::msb(a));
  std::int64_t shift = bits > 62 ? bits - 62 : 0;
  auto top = static_cast<std::uint64_t>(a >> static_cast<unsigned>(shift));
  XReal x = XReal(static_cast<double>(top)).ldexp(shift);
  return neg ? -x : x;
}

BigInt parse_count(const std::string& text) {
  std::string s = text;
  auto epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long long exp10 = 0;
  try {
    if (epos != std::string::npos) exp10 = std::stoll(s.substr(epos + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad count: " + text);
  }
  if (mant.empty() || exp10 < 0 || exp10 > 10'000'000) throw ConfigError("bad count: " + text);
  for (char c : mant) {
    if (c < '0' || c > '9') throw ConfigError("bad count: " + text);
  }
  BigInt n(mant);
  if (exp10 > 0) n *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10));
  return n;
}

std::string to_string(const BigInt& n) { return n.str(); }

}  // namespace slopelab
