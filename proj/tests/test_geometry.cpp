#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "gen.hpp"
#include "slopelab/error.hpp"
#include "slopelab/geometry.hpp"

using namespace slopelab;
using slopelab::testing::Gen;
using std::numbers::pi;
using cd = std::complex<double>;

TEST_CASE("angle spec derives theta, phi and xi") {
  const AngleSpec s(pi / 4, 3 * pi / 4);
  CHECK(s.theta() == doctest::Approx(pi / 4));
  CHECK(s.phi() == doctest::Approx(pi / 2));
  CHECK(std::abs(s.xi() - cd(0, 1)) < 1e-15);

  const AngleSpec t(pi / 6, pi / 3);
  CHECK(t.theta() == doctest::Approx(pi / 12));
  CHECK(t.phi() == doctest::Approx(pi / 4));

  CHECK_THROWS_AS(AngleSpec(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(AngleSpec(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(AngleSpec(0.0, pi), DomainError);
  CHECK_THROWS_AS(AngleSpec(0.5, 3.5), DomainError);
}

TEST_CASE("cone membership") {
  const Cone c(pi / 4);
  CHECK(c.contains(XComplex(cd(1, 0.5))));
  CHECK_FALSE(c.contains(XComplex(cd(1, 1.5))));
  CHECK_FALSE(c.contains(XComplex(cd(-1, 0))));
  CHECK(c.classify(XComplex(cd(1, 1)), 1e-12) == Membership::boundary);
  CHECK(c.classify(XComplex(cd(1, -1)), 1e-12) == Membership::boundary);
  // Far out the argument is still resolved.
  CHECK(c.contains(XComplex(XReal::exp(5000.0), XReal::exp(4999.0))));
  CHECK_THROWS_AS(Cone(0.0), DomainError);
  CHECK_THROWS_AS(Cone(pi / 2), DomainError);
}

TEST_CASE("half-planes around the cone") {
  Gen g(3);
  const double theta = pi / 5;
  for (double a : {0.0, 0.3, pi - 2 * theta}) {
    const HalfPlaneH h(a, theta);
    for (int i = 0; i < 1000; ++i) {
      // The cone always lies inside.
      CHECK(h.contains(XComplex(g.polar(-3, 3, -theta + 1e-9, theta - 1e-9))));
    }
    const double rot = a + theta;
    CHECK(h.rotation() == doctest::Approx(rot));
    // Boundary ray direction e^{-i rot} and the interior angle.
    CHECK(h.interior_angle(XComplex(std::polar(2.0, -rot + 0.5))) == doctest::Approx(0.5));
    CHECK_FALSE(h.contains(XComplex(std::polar(2.0, -rot - 0.1))));
  }
  CHECK_THROWS_AS(HalfPlaneH(0.5, pi / 2), DomainError);
  CHECK_THROWS_AS(HalfPlaneH(2.0, 0.7), DomainError);
}

TEST_CASE("hyperbolic distance") {
  // Imaginary axis: d(i, iy) = ln(y) / 2 for density |dz| / (2 Im z).
  CHECK(hyp_dist(XComplex(cd(0, 1)), XComplex(cd(0, 5))) == doctest::Approx(std::log(5.0) / 2).epsilon(1e-14));
  CHECK(hyp_dist(XComplex(cd(0, 1)), XComplex(cd(0, 2))) == doctest::Approx(std::atanh(1.0 / 3)).epsilon(1e-15));
  CHECK_THROWS_AS(hyp_dist(XComplex(cd(0, 1)), XComplex(cd(1, 0))), DomainError);

  Gen g(9);
  for (int i = 0; i < 5000; ++i) {
    const cd z = g.polar(-2, 2, 0.01, pi - 0.01);
    const cd w = g.polar(-2, 2, 0.01, pi - 0.01);
    const double direct = std::atanh(std::abs(z - w) / std::abs(z - std::conj(w)));
    const double d = hyp_dist(XComplex(z), XComplex(w));
    CHECK(d == doctest::Approx(direct).epsilon(1e-9));
    // Invariance under z -> lambda z + s.
    const double lam = g.uniform(0.1, 10.0), s = g.uniform(-5, 5);
    CHECK(hyp_dist(XComplex(lam * z + s), XComplex(lam * w + s)) == doctest::Approx(d).epsilon(1e-8));
    CHECK(hyp_step(XComplex(z), XComplex(w - z)).to_double() == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("hyperbolic step keeps precision for tiny moves") {
  // z = e^{3000} (1 + i), delta = 1: distance ~ 1 / (2 Im z).
  const XComplex z(XReal::exp(3000.0), XReal::exp(3000.0));
  const XReal h = hyp_step(z, XComplex(XReal(1.0)));
  CHECK(h.log() == doctest::Approx(-3000.0 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("disk maps invert each other") {
  Gen g(4);
  const cd tau(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const cd w = std::polar(g.uniform(0, 0.99), g.uniform(-pi, pi));
    const XComplex z = disk_to_halfplane(w, tau);
    CHECK(z.im.sign() > 0);
    CHECK(std::abs(halfplane_to_disk(z, tau) - w) < 1e-12);
  }
  CHECK_THROWS_AS(disk_to_halfplane(tau, tau), DomainError);
  CHECK(slope_halfplane_to_disk(pi / 2) == doctest::Approx(0.0));
  CHECK(slope_halfplane_to_disk(pi / 4) == doctest::Approx(pi / 4));
  CHECK_THROWS_AS(slope_halfplane_to_disk(4.0), DomainError);
}
