#pragma once

// Extended-range reals and complexes, plus log-domain positive reals.
//
// The coefficient schedules this library works with have shifts like
// exp(10^4), far outside the double range. XReal keeps a double mantissa
// with a 64-bit binary exponent; PosLog keeps only the natural logarithm.

#include <complex>
#include <cstdint>
#include <span>
#include <string>

namespace slopelab {

class XReal {
 public:
  constexpr XReal() = default;
  XReal(double v);  // NOLINT(google-explicit-constructor)

  /// Builds mantissa * 2^exp2 and renormalizes. Throws NumericFailure on
  /// non-finite mantissa or exponent overflow.
  static XReal from_parts(double mantissa, std::int64_t exp2);
  /// e^x for any finite x.
  static XReal exp(double x);

  /// Signed mantissa, |m| in [1,2) or 0.
  double mantissa() const { return m_; }
  std::int64_t exp2() const { return e_; }

  bool is_zero() const { return m_ == 0.0; }
  int sign() const { return (m_ > 0.0) - (m_ < 0.0); }

  /// Nearest double; saturates to +-inf or 0 outside the double range.
  double to_double() const;

  XReal operator-() const { return raw(-m_, e_); }
  XReal abs() const { return raw(m_ < 0 ? -m_ : m_, e_); }
  XReal ldexp(std::int64_t k) const;
  XReal sqrt() const;
  XReal floor() const;

  /// Natural log. Requires a positive value.
  double log() const;
  double log10() const;

  XReal& operator+=(const XReal& o);
  XReal& operator-=(const XReal& o) { return *this += -o; }
  XReal& operator*=(const XReal& o);
  XReal& operator/=(const XReal& o);

  friend XReal operator+(XReal a, const XReal& b) { return a += b; }
  friend XReal operator-(XReal a, const XReal& b) { return a -= b; }
  friend XReal operator*(XReal a, const XReal& b) { return a *= b; }
  friend XReal operator/(XReal a, const XReal& b) { return a /= b; }

  /// Total order consistent with the reals: -1, 0 or 1.
  friend int compare(const XReal& a, const XReal& b);
  friend bool operator==(const XReal& a, const XReal& b) { return a.m_ == b.m_ && a.e_ == b.e_; }
  friend bool operator<(const XReal& a, const XReal& b) { return compare(a, b) < 0; }
  friend bool operator>(const XReal& a, const XReal& b) { return compare(a, b) > 0; }
  friend bool operator<=(const XReal& a, const XReal& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const XReal& a, const XReal& b) { return compare(a, b) >= 0; }

  std::string str() const;

 private:
  static XReal raw(double m, std::int64_t e) {
    XReal x;
    x.m_ = m;
    x.e_ = m == 0.0 ? 0 : e;
    return x;
  }

  double m_ = 0.0;
  std::int64_t e_ = 0;
};

inline XReal max(const XReal& a, const XReal& b) { return a < b ? b : a; }
inline XReal min(const XReal& a, const XReal& b) { return b < a ? b : a; }

struct XComplex {
  XReal re;
  XReal im;

  XComplex() = default;
  XComplex(XReal r, XReal i = XReal()) : re(r), im(i) {}  // NOLINT
  XComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT
  XComplex(double r) : re(r) {}  // NOLINT

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  XComplex conj() const { return {re, -im}; }
  XComplex operator-() const { return {-re, -im}; }

  /// |z| without intermediate overflow.
  XReal abs() const;
  /// ln|z|. Requires z != 0.
  double log_abs() const;
  /// Principal argument in (-pi, pi].
  double arg() const;
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

  XComplex& operator+=(const XComplex& o);
  XComplex& operator-=(const XComplex& o);
  XComplex& operator*=(const XComplex& o);
  XComplex& operator/=(const XComplex& o);

  friend XComplex operator+(XComplex a, const XComplex& b) { return a += b; }
  friend XComplex operator-(XComplex a, const XComplex& b) { return a -= b; }
  friend XComplex operator*(XComplex a, const XComplex& b) { return a *= b; }
  friend XComplex operator/(XComplex a, const XComplex& b) { return a /= b; }
  friend XComplex operator*(const XComplex& a, const XReal& s) { return {a.re * s, a.im * s}; }
  friend XComplex operator*(const XReal& s, const XComplex& a) { return {a.re * s, a.im * s}; }
  friend bool operator==(const XComplex& a, const XComplex& b) { return a.re == b.re && a.im == b.im; }
};

/// r * e^{i angle}.
XComplex polar(const XReal& r, double angle);

/// z^e on the principal branch, exp(e (ln|z| + i arg z)). Throws DomainError for z = 0.
XComplex principal_pow(const XComplex& z, double e);

/// z^i on the principal branch: e^{-arg z} (cos ln|z| + i sin ln|z|).
XComplex principal_pow_imag(const XComplex& z);

/// A positive real stored as its natural logarithm.
class PosLog {
 public:
  /// Throws DomainError unless v > 0 and finite.
  explicit PosLog(double v);
  /// Throws DomainError unless ln is finite.
  static PosLog from_ln(double ln);
  /// Throws DomainError unless v > 0.
  static PosLog from_xreal(const XReal& v);

  double ln() const { return ln_; }
  XReal value() const { return XReal::exp(ln_); }
  double to_double() const;

  PosLog pow(double e) const { return from_ln(ln_ * e); }

  friend PosLog operator*(const PosLog& a, const PosLog& b) { return from_ln(a.ln_ + b.ln_); }
  friend PosLog operator/(const PosLog& a, const PosLog& b) { return from_ln(a.ln_ - b.ln_); }
  friend PosLog operator+(const PosLog& a, const PosLog& b);
  friend bool operator==(const PosLog& a, const PosLog& b) { return a.ln_ == b.ln_; }
  friend bool operator<(const PosLog& a, const PosLog& b) { return a.ln_ < b.ln_; }
  friend bool operator>(const PosLog& a, const PosLog& b) { return a.ln_ > b.ln_; }
  friend bool operator<=(const PosLog& a, const PosLog& b) { return a.ln_ <= b.ln_; }
  friend bool operator>=(const PosLog& a, const PosLog& b) { return a.ln_ >= b.ln_; }

 private:
  struct Tag {};
  PosLog(Tag, double ln) : ln_(ln) {}
  double ln_;
};

/// log(sum e^{t_i}) evaluated against the largest term. Throws DomainError on an
/// empty sequence.
PosLog plog_sum(std::span<const PosLog> terms);

}  // namespace slopelab
