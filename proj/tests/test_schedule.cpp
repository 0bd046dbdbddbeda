#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "slopelab/error.hpp"
#include "slopelab/schedule.hpp"

using namespace slopelab;
using std::numbers::pi;

namespace {

const AngleSpec kSym(pi / 4, 3 * pi / 4);

Schedule single_term(double gamma_ln = std::log(1024.0)) {
  const double eps = 0.125;
  return Schedule(kSym, {Term{1, PosLog(1.0), PosLog::from_ln(gamma_ln), eps, parity_phase(1, eps, pi / 4)}});
}

// Copy of s with term k's amplitude multiplied by e^{dln}.
Schedule scale_amplitude(const Schedule& s, int k, double dln) {
  std::vector<Term> t = s.terms();
  t[static_cast<std::size_t>(k - 1)].a = PosLog::from_ln(t[static_cast<std::size_t>(k - 1)].a.ln() + dln);
  return Schedule(s.angle(), t, s.tail_certificate());
}

Schedule with_gamma1(const Schedule& s, double gamma) {
  std::vector<Term> t = s.terms();
  t[0].gamma = PosLog(gamma);
  return Schedule(s.angle(), t, s.tail_certificate());
}

}  // namespace

TEST_CASE("delta theta") {
  CHECK(delta_theta(pi / 4) == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(delta_theta(pi / 3) == doctest::Approx(1 / std::sqrt(7.0)).epsilon(1e-15));
  CHECK(delta_theta(1e-9) == doctest::Approx(0.5));
  CHECK_THROWS_AS(delta_theta(0.0), DomainError);
  CHECK_THROWS_AS(delta_theta(pi / 2), DomainError);
}

TEST_CASE("parity phases") {
  CHECK(parity_phase(1, 0.125, pi / 4) == doctest::Approx(-pi / 8));
  CHECK(parity_phase(2, 0.0625, pi / 4) == doctest::Approx(pi / 4 - pi / 16));
}

TEST_CASE("example schedule coefficients") {
  const Schedule one = example21(pi / 4, 10, 10, 1);
  CHECK(one.term(1).eps == doctest::Approx(0.125));
  CHECK(one.term(1).a.to_double() == doctest::Approx(10.0));
  CHECK(one.term(1).eps * one.term(1).gamma.ln() == doctest::Approx(3 * std::log(10.0)));
  CHECK(one.term(1).theta == doctest::Approx(-pi / 8));

  const Schedule two = example21(pi / 4, 10, 10, 2);
  CHECK(two.term(2).eps == doctest::Approx(1.0 / 16));
  CHECK(two.term(2).a.to_double() == doctest::Approx(400.0));
  CHECK(two.term(2).eps * two.term(2).gamma.ln() == doctest::Approx(9 * std::log(20.0)));
  CHECK(two.term(2).theta == doctest::Approx(pi / 4 - pi / 16));

  // a_{k+1} / a_k = C1 (k+1)^2 in logs.
  const Schedule s = example21(pi / 4, 3.0, 1.5, 6);
  for (int k = 1; k < 6; ++k)
    CHECK(s.term(k + 1).a.ln() - s.term(k).a.ln() == doctest::Approx(std::log(3.0 * (k + 1) * (k + 1))).epsilon(1e-14));
}

TEST_CASE("example schedule validates with searched constants") {
  const auto c = find_example21_constants(kSym, 4);
  REQUIRE(c.has_value());
  CHECK(validate(example21(kSym, c->c1, c->c2, 4)).passed);
}

TEST_CASE("single-term schedule") {
  const ValidationReport r = validate(single_term());
  CHECK(r.passed);
  // 1/1024^{1/8} against gamma_1/2 = 512.
  CHECK(r.at("6").slack_ln == doctest::Approx(std::log(512.0) + 1.25 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.at("6").finite_horizon_only);

  const ValidationReport bad = validate(single_term(0.0));
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.at("7").passed);
}

TEST_CASE("synthesized schedules validate across parameters") {
  const std::vector<AngleSpec> angles{kSym, AngleSpec(pi / 6, pi / 3), AngleSpec(0.1, 0.5), AngleSpec(1.0, 2.8)};
  for (const AngleSpec& angle : angles) {
    for (int K = 2; K <= 6; ++K) {
      for (double safety : {1.5, 2.0, 10.0}) {
        CAPTURE(angle.a());
        CAPTURE(angle.b());
        CAPTURE(K);
        CAPTURE(safety);
        const Schedule s = synthesize(angle, K, safety);
        const ValidationReport r = validate(s);
        CHECK(r.passed);
        CHECK(s.term(1).a.ln() == 0.0);
        for (int k = 1; k <= K; ++k) {
          const Term& t = s.term(k);
          CHECK(t.eps == doctest::Approx(angle.theta() / pi * std::ldexp(1.0, -k)));
          CHECK(std::fabs(t.theta) + pi * t.eps <= angle.theta() + 1e-12);
          CHECK(t.theta - pi * t.eps >= -angle.theta() - 1e-12);
          if (k > 1) CHECK(t.gamma.ln() > 2 * s.term(k - 1).gamma.ln());
        }
        // The exponent law fixes the slack of condition 4; the others carry the safety factor.
        for (const char* id : {"6", "8_prefix", "8_suffix"}) CHECK(r.at(id).slack_ln >= std::log(safety) - 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(synthesize(kSym, 1), DomainError);
}

TEST_CASE("amplifying one amplitude breaks validation") {
  const Schedule s = synthesize(kSym, 4, 2.0);
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    const ValidationReport r = validate(scale_amplitude(s, k, 100 * std::log(10.0)));
    CHECK_FALSE(r.passed);
    CHECK((!r.at("6").passed || !r.at("8_prefix").passed || !r.at("8_suffix").passed));
  }
  CHECK_FALSE(validate(with_gamma1(s, 1.0)).passed);
}

TEST_CASE("phase and exponent violations") {
  std::vector<Term> t = single_term().terms();
  t[0].theta += 1e-9;
  const ValidationReport r = validate(Schedule(kSym, t));
  CHECK_FALSE(r.at("5").passed);

  t = single_term().terms();
  t[0].eps = 0.3;  // pi eps > theta
  t[0].theta = parity_phase(1, 0.3, pi / 4);
  CHECK_FALSE(validate(Schedule(kSym, t)).at("4").passed);
}

TEST_CASE("tail certificates") {
  const Schedule s = synthesize(kSym, 4, 2.0);
  CHECK_FALSE(s.tail_bound().has_value());
  CHECK(validate(s).finite_horizon_only);

  const Schedule bad = s.with_certificate(TailCertificate{4, 1.5});
  CHECK_THROWS_AS(bad.tail_bound(), DomainError);
  CHECK_THROWS_AS(validate(bad), DomainError);

  // t_4 * r / (1 - r).
  const Schedule cert = s.with_certificate(TailCertificate{4, 0.5});
  REQUIRE(cert.tail_bound().has_value());
  CHECK(cert.tail_bound()->ln() == doctest::Approx(s.term(4).ln_weight()).epsilon(1e-12));
  CHECK_FALSE(cert.truncated(3).tail_certificate().has_value());
  CHECK(cert.truncated(3).size() == 3);
}

TEST_CASE("integrability sums") {
  const double eps = 0.125;
  const Schedule s(kSym, {Term{1, PosLog(1.0), PosLog::from_ln(8.0), eps, parity_phase(1, eps, pi / 4)}});
  const L1Report r = check_l1_condition(s);
  CHECK(std::exp(r.log_sum.ln()) == doctest::Approx(std::log1p(std::exp(16.0)) / std::exp(1.0)).epsilon(1e-14));
  CHECK(std::exp(r.eps_sum.ln()) == doctest::Approx(8.0 / std::exp(1.0)).epsilon(1e-14));
  CHECK(r.finite_horizon_only);

  CHECK(check_l1_condition(synthesize(kSym, 4, 2.0)).passed);
  CHECK(ln_log1p_gamma_sq(1e5) == doctest::Approx(std::log(2e5)).epsilon(1e-14));
  CHECK(ln_log1p_gamma_sq(0.0) == doctest::Approx(std::log(std::log(2.0))).epsilon(1e-14));
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(Schedule(kSym, {Term{2, PosLog(1.0), PosLog(4.0), 0.1, 0.0}}), DomainError);
  CHECK_THROWS_AS(Schedule(kSym, {Term{1, PosLog(1.0), PosLog(4.0), 0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(Schedule(kSym, {Term{1, PosLog(1.0), PosLog(4.0), 0.1, NAN}}), DomainError);
}
