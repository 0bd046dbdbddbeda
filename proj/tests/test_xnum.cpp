#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "gen.hpp"
#include "slopelab/bigcount.hpp"
#include "slopelab/error.hpp"
#include "slopelab/xnum.hpp"

using namespace slopelab;
using slopelab::testing::Gen;

namespace {

// Distance in units in the last place between two finite doubles of equal sign.
double ulps(double got, double want) {
  if (got == want) return 0.0;
  const double u = std::nextafter(std::fabs(want), INFINITY) - std::fabs(want);
  return std::fabs(got - want) / u;
}

}  // namespace

TEST_CASE("xreal arithmetic tracks double within 4 ulp") {
  Gen g(11);
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double a = g.magnitude(-100, 100);
    const double b = g.magnitude(-100, 100);
    const XReal xa(a), xb(b);
    worst = std::max(worst, ulps((xa * xb).to_double(), a * b));
    worst = std::max(worst, ulps((xa / xb).to_double(), a / b));
    // Sums lose relative accuracy under cancellation in double too; compare
    // against the correctly rounded long double result.
    const long double s = static_cast<long double>(a) + b;
    if (s != 0.0L) worst = std::max(worst, ulps((xa + xb).to_double(), static_cast<double>(s)));
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("xreal keeps values past the double range") {
  const XReal big = XReal::exp(1e5);
  CHECK(big.log() == doctest::Approx(1e5).epsilon(1e-14));
  CHECK(std::isinf(big.to_double()));
  const XReal tiny = XReal::exp(-1e5);
  CHECK((big * tiny).to_double() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tiny.to_double() == 0.0);
  CHECK(tiny > XReal(0.0));
  CHECK(compare(XReal::exp(2e5), big) > 0);
  CHECK(compare(-big, XReal(-1.0)) < 0);
  CHECK(XReal::exp(10.0).log10() == doctest::Approx(10.0 / std::log(10.0)));
}

TEST_CASE("xreal absorbs small addends exactly like double does") {
  const XReal big = XReal::exp(1000.0);
  CHECK((big + XReal(1.0)) == big);
  CHECK((big - big).is_zero());
  CHECK(XReal(3.75).floor().to_double() == 3.0);
  CHECK(XReal(-3.25).floor().to_double() == -4.0);
  CHECK(XReal(9.0).sqrt().to_double() == 3.0);
  CHECK(XReal(1.5).ldexp(4000).ldexp(-4000).to_double() == 1.5);
}

TEST_CASE("xreal rejects non-finite input") {
  CHECK_THROWS_AS(XReal::from_parts(NAN, 0), NumericFailure);
  CHECK_THROWS_AS(XReal::from_parts(INFINITY, 0), NumericFailure);
  CHECK_THROWS(XReal(-1.0).log());
}

TEST_CASE("xcomplex arithmetic agrees with std::complex") {
  Gen g(5);
  for (int i = 0; i < 10000; ++i) {
    const std::complex<double> a(g.magnitude(-20, 20), g.magnitude(-20, 20));
    const std::complex<double> b(g.magnitude(-20, 20), g.magnitude(-20, 20));
    const XComplex xa(a), xb(b);
    const auto prod = (xa * xb).to_complex();
    const auto quot = (xa / xb).to_complex();
    CHECK(std::abs(prod - a * b) <= 1e-14 * std::abs(a) * std::abs(b));
    CHECK(std::abs(quot - a / b) <= 1e-14 * std::abs(a) / std::abs(b));
    CHECK(xa.abs().to_double() == doctest::Approx(std::abs(a)).epsilon(1e-15));
    CHECK(xa.arg() == doctest::Approx(std::arg(a)).epsilon(1e-15));
  }
}

TEST_CASE("principal powers") {
  // z^e against std::pow on the principal branch.
  Gen g(7);
  for (int i = 0; i < 2000; ++i) {
    const std::complex<double> z = g.polar(-5, 5, -3.1, 3.1);
    const double e = g.uniform(-1.0, 1.0);
    const auto got = principal_pow(XComplex(z), e).to_complex();
    const auto want = std::pow(z, e);
    CHECK(std::abs(got - want) <= 1e-13 * std::abs(want));
  }
  CHECK_THROWS_AS(principal_pow(XComplex(), 0.5), DomainError);

  // i^i = e^{-pi/2}.
  const auto ii = principal_pow_imag(XComplex(std::complex<double>(0, 1))).to_complex();
  CHECK(ii.real() == doctest::Approx(std::exp(-M_PI / 2)).epsilon(1e-15));
  CHECK(std::fabs(ii.imag()) < 1e-16);

  // Huge moduli: (e^{5000})^{-1/2} = e^{-2500}.
  const XComplex huge(XReal::exp(5000.0));
  CHECK(principal_pow(huge, -0.5).log_abs() == doctest::Approx(-2500.0).epsilon(1e-14));
}

TEST_CASE("poslog") {
  CHECK(PosLog(2.0).ln() == doctest::Approx(std::log(2.0)));
  CHECK((PosLog(2.0) + PosLog(3.0)).to_double() == doctest::Approx(5.0).epsilon(1e-15));
  CHECK((PosLog(6.0) / PosLog(3.0)).to_double() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(PosLog::from_ln(1e6).pow(0.5).ln() == 5e5);
  CHECK_THROWS_AS(PosLog(0.0), DomainError);
  CHECK_THROWS_AS(PosLog(-1.0), DomainError);
  CHECK_THROWS_AS(PosLog::from_ln(INFINITY), DomainError);

  const std::vector<PosLog> t{PosLog::from_ln(1e4), PosLog::from_ln(1e4), PosLog::from_ln(0.0)};
  CHECK(plog_sum(t).ln() == doctest::Approx(1e4 + std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(plog_sum(std::vector<PosLog>{}), DomainError);
}

TEST_CASE("big counts") {
  CHECK(to_string(parse_count("12345")) == "12345");
  CHECK(to_string(parse_count("1e40")) == "1" + std::string(40, '0'));
  const BigInt huge = parse_count("3e100000");
  CHECK(to_xreal(huge).log10() == doctest::Approx(100000 + std::log10(3.0)).epsilon(1e-14));
  CHECK(to_bigint(XReal(1e20)) == parse_count("1e20"));
  CHECK(to_bigint(to_xreal(huge)) <= huge);
  CHECK_THROWS(parse_count("-3"));
  CHECK_THROWS(parse_count("1.5"));
  CHECK_THROWS(parse_count("abc"));
}
