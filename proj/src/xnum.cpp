#include "slopelab/xnum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "slopelab/error.hpp"

namespace slopelab {

namespace {

constexpr std::int64_t kMaxExp = std::int64_t{1} << 62;
constexpr double kLn2 = std::numbers::ln2;

// Beyond this alignment shift the smaller addend cannot affect rounding.
constexpr std::int64_t kAbsorbShift = 110;

// m * 2^k for |m| in [1,2) as a double, k possibly far out of range.
double scaled(double m, std::int64_t k) {
  if (m == 0.0) return 0.0;
  if (k > 2000) return std::copysign(HUGE_VAL, m);
  if (k < -2000) return std::copysign(0.0, m);
  return std::ldexp(m, static_cast<int>(k));
}

}  // namespace

XReal::XReal(double v) { *this = from_parts(v, 0); }

XReal XReal::from_parts(double mantissa, std::int64_t exp2) {
  if (!std::isfinite(mantissa)) throw NumericFailure("XReal: non-finite mantissa");
  if (mantissa == 0.0) return {};
  int k = 0;
  double f = std::frexp(mantissa, &k);
  std::int64_t e = exp2 + k - 1;
  if (e > kMaxExp || e < -kMaxExp) throw NumericFailure("XReal: exponent overflow");
  return raw(2.0 * f, e);
}

XReal XReal::exp(double x) {
  if (!std::isfinite(x)) throw NumericFailure("XReal::exp: non-finite argument");
  // Reduce in long double so the fractional part keeps its digits for large x.
  long double q = std::floor(static_cast<long double>(x) / std::numbers::ln2_v<long double>);
  long double r = static_cast<long double>(x) - q * std::numbers::ln2_v<long double>;
  if (std::fabs(q) > static_cast<long double>(kMaxExp)) throw NumericFailure("XReal::exp: overflow");
  return from_parts(static_cast<double>(std::exp(r)), static_cast<std::int64_t>(q));
}

double XReal::to_double() const {
  if (m_ == 0.0) return 0.0;
  return scaled(m_, e_);
}

XReal XReal::ldexp(std::int64_t k) const {
  if (m_ == 0.0) return {};
  return from_parts(m_, e_ + k);
}

XReal XReal::sqrt() const {
  if (m_ < 0.0) throw DomainError("XReal::sqrt of a negative value");
  if (m_ == 0.0) return {};
  double m = m_;
  std::int64_t e = e_;
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return from_parts(std::sqrt(m), e / 2);
}

XReal XReal::floor() const {
  if (m_ == 0.0 || e_ >= 52) return *this;
  if (e_ < 0) return m_ > 0.0 ? XReal() : XReal(-1.0);
  return XReal(std::floor(std::ldexp(m_, static_cast<int>(e_))));
}

double XReal::log() const {
  if (m_ <= 0.0) throw DomainError("XReal::log of a non-positive value");
  return std::log(m_) + static_cast<double>(e_) * kLn2;
}

double XReal::log10() const { return log() / std::numbers::ln10; }

XReal& XReal::operator+=(const XReal& o) {
  if (o.m_ == 0.0) return *this;
  if (m_ == 0.0) return *this = o;
  const XReal& hi = e_ >= o.e_ ? *this : o;
  const XReal& lo = e_ >= o.e_ ? o : *this;
  std::int64_t d = hi.e_ - lo.e_;
  if (d > kAbsorbShift) return *this = hi;
  double s = hi.m_ + std::ldexp(lo.m_, static_cast<int>(-d));
  return *this = from_parts(s, hi.e_);
}

XReal& XReal::operator*=(const XReal& o) {
  if (m_ == 0.0 || o.m_ == 0.0) return *this = XReal();
  return *this = from_parts(m_ * o.m_, e_ + o.e_);
}

XReal& XReal::operator/=(const XReal& o) {
  if (o.m_ == 0.0) throw DomainError("XReal: division by zero");
  if (m_ == 0.0) return *this;
  return *this = from_parts(m_ / o.m_, e_ - o.e_);
}

int compare(const XReal& a, const XReal& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  int mag = 0;
  if (a.e_ != b.e_) {
    mag = a.e_ < b.e_ ? -1 : 1;
  } else {
    double ma = std::fabs(a.m_), mb = std::fabs(b.m_);
    mag = (ma > mb) - (ma < mb);
  }
  return sa > 0 ? mag : -mag;
}

std::string XReal::str() const {
  if (m_ == 0.0) return "0";
  double l10 = std::log10(std::fabs(m_)) + static_cast<double>(e_) * std::log10(2.0);
  double ip = std::floor(l10);
  double lead = std::pow(10.0, l10 - ip);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.6fe%+.0f", m_ < 0 ? "-" : "", lead, ip);
  return buf;
}

// --- XComplex ---------------------------------------------------------------

namespace {

struct Scaled {
  double re;
  double im;
  std::int64_t e;
};

// Both parts as doubles relative to 2^e with e the larger exponent.
Scaled common_scale(const XComplex& z) {
  std::int64_t e = 0;
  if (z.re.is_zero()) {
    e = z.im.exp2();
  } else if (z.im.is_zero()) {
    e = z.re.exp2();
  } else {
    e = std::max(z.re.exp2(), z.im.exp2());
  }
  return {scaled(z.re.mantissa(), z.re.exp2() - e), scaled(z.im.mantissa(), z.im.exp2() - e), e};
}

}  // namespace

XReal XComplex::abs() const {
  if (is_zero()) return {};
  Scaled s = common_scale(*this);
  return XReal::from_parts(std::hypot(s.re, s.im), s.e);
}

double XComplex::log_abs() const {
  if (is_zero()) throw DomainError("log|z| of zero");
  Scaled s = common_scale(*this);
  return std::log(std::hypot(s.re, s.im)) + static_cast<double>(s.e) * kLn2;
}

double XComplex::arg() const {
  if (is_zero()) return 0.0;
  Scaled s = common_scale(*this);
  double a = std::atan2(s.im, s.re);
  // Keep the principal range (-pi, pi]: a negative imaginary part too small to
  // survive scaling still sits strictly below the cut.
  if (a == -std::numbers::pi || (s.im == 0.0 && im.sign() < 0 && s.re < 0.0)) {
    return std::nextafter(-std::numbers::pi, 0.0);
  }
  return a;
}

XComplex& XComplex::operator+=(const XComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

XComplex& XComplex::operator-=(const XComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

XComplex& XComplex::operator*=(const XComplex& o) {
  XReal r = re * o.re - im * o.im;
  XReal i = re * o.im + im * o.re;
  re = r;
  im = i;
  return *this;
}

XComplex& XComplex::operator/=(const XComplex& o) {
  if (o.is_zero()) throw DomainError("XComplex: division by zero");
  XReal den = o.re * o.re + o.im * o.im;
  XReal r = (re * o.re + im * o.im) / den;
  XReal i = (im * o.re - re * o.im) / den;
  re = r;
  im = i;
  return *this;
}

XComplex polar(const XReal& r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

XComplex principal_pow(const XComplex& z, double e) {
  if (z.is_zero()) throw DomainError("principal_pow: z = 0");
  return polar(XReal::exp(e * z.log_abs()), e * z.arg());
}

XComplex principal_pow_imag(const XComplex& z) {
  if (z.is_zero()) throw DomainError("principal_pow_imag: z = 0");
  return polar(XReal::exp(-z.arg()), z.log_abs());
}

// --- PosLog -------------------------------------------------------------------

PosLog::PosLog(double v) : ln_(0.0) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("PosLog: value must be positive and finite");
  ln_ = std::log(v);
}

PosLog PosLog::from_ln(double ln) {
  if (!std::isfinite(ln)) throw DomainError("PosLog: non-finite logarithm");
  return PosLog(Tag{}, ln);
}

PosLog PosLog::from_xreal(const XReal& v) {
  if (v.sign() <= 0) throw DomainError("PosLog: value must be positive");
  return from_ln(v.log());
}

double PosLog::to_double() const { return std::exp(ln_); }

PosLog operator+(const PosLog& a, const PosLog& b) {
  const PosLog terms[] = {a, b};
  return plog_sum(terms);
}

PosLog plog_sum(std::span<const PosLog> terms) {
  if (terms.empty()) throw DomainError("plog_sum: empty sequence");
  auto top = std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it != top) acc += std::exp(it->ln() - top->ln());
  }
  return PosLog::from_ln(top->ln() + std::log1p(acc));
}

}  // namespace slopelab
