#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "gen.hpp"
#include "slopelab/error.hpp"
#include "slopelab/orbit.hpp"

using namespace slopelab;
using slopelab::testing::Gen;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

const AngleSpec kSym(pi / 4, 3 * pi / 4);

Schedule single_term(double a = 1.0) {
  return Schedule(kSym, {Term{1, PosLog(a), PosLog(1024.0), 0.125, parity_phase(1, 0.125, pi / 4)}});
}

OrbitConfig every_step(EngineMode mode, long long budget) {
  OrbitConfig c;
  c.mode = mode;
  c.max_applications = BigInt(budget);
  c.checkpoint_stride = 1;
  c.geometric_checkpoints = false;
  return c;
}

MapHandle affine(std::complex<double> scale, std::complex<double> shift) {
  return MapHandle::custom("affine", [=](const XComplex& z) { return XComplex(scale) * z + XComplex(shift); });
}

}  // namespace

TEST_CASE("translation stub") {
  OrbitConfig c = every_step(EngineMode::exact, 5);
  c.z0 = XComplex(cd(0, 1));
  const OrbitTrace t = iterate_exact(affine(1.0, 1.0), c);
  CHECK(t.last_z.to_complex() == cd(5, 1));
  CHECK(t.applications == 5);
  CHECK(t.checkpoints.size() == 6);
  CHECK_THROWS_AS(iterate_accelerated(affine(1.0, 1.0), c), DomainError);
  c.max_applications.reset();
  CHECK_THROWS_AS(iterate_exact(affine(1.0, 1.0), c), DomainError);
}

TEST_CASE("single-term exact steps stay below the step bound") {
  OrbitConfig c = every_step(EngineMode::exact, 1000);
  c.z0 = XComplex(512.0);
  const OrbitTrace t = iterate_exact(MapHandle::F(single_term()), c);
  REQUIRE(t.checkpoints.size() == 1001);
  for (std::size_t i = 1; i < t.checkpoints.size(); ++i) {
    const double dx = (t.checkpoints[i].z.re - t.checkpoints[i - 1].z.re).to_double();
    CHECK(dx > 0.0);
    CHECK(dx <= 0.5);
  }
  CHECK(t.incomplete);
  CHECK_FALSE(t.complete);
  CHECK(t.max_step_ratio * 512 <= 0.5);
}

TEST_CASE("runtime assertions fire on a schedule with oversized steps") {
  // a = 10^6 gives |p| near 4e5, far above gamma_1/2 = 512.
  OrbitConfig c = every_step(EngineMode::exact, 10);
  CHECK_THROWS_AS(iterate_exact(MapHandle::F(single_term(1e6)), c), NumericFailure);
}

TEST_CASE("wolff orbit stays in the upper half-plane") {
  OrbitConfig c;
  c.mode = EngineMode::exact;
  c.z0 = XComplex(cd(0, 10));
  c.max_applications = BigInt(100000);
  bool ok = true;
  c.sink = [&](const Checkpoint& cp) { ok = ok && cp.z.im.sign() > 0; };
  const OrbitTrace t = iterate(MapHandle::wolff(), c);
  CHECK(ok);
  CHECK(t.last_z.im.sign() > 0);
  CHECK(t.applications == 100000);
}

TEST_CASE("unit supersteps reproduce exact stepping bit for bit") {
  const MapHandle F = MapHandle::F(single_term());
  OrbitConfig ex = every_step(EngineMode::exact, 2000);
  ex.z0 = XComplex(512.0);
  OrbitConfig ac = ex;
  ac.mode = EngineMode::accelerated;
  ac.eta = 1e-30;
  const OrbitTrace a = iterate(F, ex);
  const OrbitTrace b = iterate(F, ac);
  REQUIRE(a.checkpoints.size() == b.checkpoints.size());
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    CHECK(a.checkpoints[i].count == b.checkpoints[i].count);
    CHECK(a.checkpoints[i].z == b.checkpoints[i].z);
  }
  CHECK(b.supersteps == 2000);
}

TEST_CASE("accelerated engine agrees with exact stepping") {
  const MapHandle F = MapHandle::F(single_term());
  OrbitConfig ex = every_step(EngineMode::exact, 10000);
  ex.z0 = XComplex(512.0);
  std::map<BigInt, XComplex> exact;
  ex.store_checkpoints = false;
  ex.sink = [&](const Checkpoint& cp) { exact.emplace(cp.count, cp.z); };
  iterate(F, ex);

  OrbitConfig ac;
  ac.z0 = ex.z0;
  ac.max_applications = BigInt(10000);
  ac.checkpoint_stride = 1;
  const OrbitTrace t = iterate_accelerated(F, ac);
  CHECK(t.supersteps < 10000);
  for (const Checkpoint& cp : t.checkpoints) {
    const XComplex& z = exact.at(cp.count);
    CHECK(std::fabs(cp.arg() - z.arg()) <= 10 * ac.eta);
    CHECK(std::fabs(cp.z.log_abs() - z.log_abs()) / std::log(10.0) <= 1e-4);
  }
}

TEST_CASE("desk schedule orbit structure") {
  const Schedule s = synthesize(kSym, 4, 2.0);
  const MapHandle F = MapHandle::F(s);
  OrbitConfig c;
  const OrbitTrace t = iterate_accelerated(F, c);
  CHECK(t.complete);
  CHECK(t.applications == t.superstep_total);
  CHECK(t.checkpoints.back().count == t.applications);
  REQUIRE(t.events.size() == 4);
  const double half_g1 = s.term(1).gamma.to_double() / 2;
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const RegionEvent& ev = t.events[i];
    CAPTURE(ev.k);
    CHECK(ev.k == static_cast<int>(i) + 1);
    REQUIRE(ev.exit_count.has_value());
    CHECK(ev.entry_count < *ev.exit_count);
    if (i > 0) CHECK(*t.events[i - 1].exit_count <= ev.entry_count);
    CHECK(ev.entry_overshoot.sign() >= 0);
    CHECK(ev.entry_overshoot <= XReal(half_g1));
    CHECK(ev.max_ratio <= 1.0 / ev.k);
    CHECK(ev.quotient_violations == 0);
    CHECK(ev.band == doctest::Approx(exit_band(s, ev.k)));
  }
  CHECK(t.max_step_ratio <= 1.0);
  CHECK(t.min_step_cos > 0.0);

  const SlopeReport r = slope_report(t, kSym);
  CHECK(r.exits_in_band);
  CHECK(r.exits.size() == 4);
  CHECK(r.exits[1].arg > 0);
  CHECK(r.exits[2].arg < 0);
  CHECK(r.within_angle);
  CHECK(r.a_hat <= r.b_hat);
  CHECK(non_increasing(r.hyp_steps, 1e-10));
  CHECK(r.hyp_steps.back() < r.hyp_steps.front() * XReal(0.5));

  // The series recomputed from the stored points matches the engine's own values.
  const std::vector<XReal> h = hyp_step_series(F, t);
  REQUIRE(h.size() == r.hyp_steps.size());
  for (std::size_t i = 0; i < h.size(); i += 97)
    CHECK(std::fabs(h[i].log() - r.hyp_steps[i].log()) < 1e-9);
}

TEST_CASE("the conjugated map reports the same orbit rotated") {
  const Schedule s = synthesize(kSym, 4, 2.0);
  OrbitConfig c;
  const OrbitTrace tF = iterate_accelerated(MapHandle::F(s), c);
  const OrbitTrace tf = iterate_accelerated(MapHandle::f(s), c);
  REQUIRE(tF.checkpoints.size() == tf.checkpoints.size());
  CHECK(tF.applications == tf.applications);
  const SlopeReport a = slope_report(tF, kSym), b = slope_report(tf, kSym);
  CHECK(a.a_hat == doctest::Approx(b.a_hat).epsilon(1e-12));
  CHECK(a.b_hat == doctest::Approx(b.b_hat).epsilon(1e-12));
}

TEST_CASE("ratio of the other terms") {
  const Schedule one = single_term();
  CHECK(std::abs(ratio_Rk(one, 1, XComplex(2000.0))) == 0.0);

  const Schedule s = synthesize(kSym, 4, 2.0);
  const double theta = s.theta();
  Gen g(41);
  for (int k = 1; k <= 4; ++k) {
    const double lo = s.term(k).gamma.ln(), hi = 2 * lo;
    const Term& t = s.term(k);
    const double floor_ln = std::log(delta_theta(theta)) + t.a.ln() - 2 * t.eps * t.gamma.ln();
    for (int i = 0; i < 500; ++i) {
      // x in [gamma_k, gamma_k^2], inside the cone.
      const XReal x = XReal::exp(g.uniform(lo, hi));
      const XComplex z(x, x * XReal(std::tan(g.uniform(-theta, theta) * 0.999)));
      CHECK(std::abs(ratio_Rk(s, k, z)) <= 1.0 / k);
      CHECK(eval_term(s, k, z).log_abs() >= floor_ln);
    }
  }
}

TEST_CASE("hyperbolic step stubs") {
  OrbitConfig c = every_step(EngineMode::exact, 40);
  c.z0 = XComplex(cd(0, 1));
  const MapHandle dil = affine(2.0, 0.0);
  const OrbitTrace t = iterate_exact(dil, c);
  for (const XReal& h : hyp_step_series(dil, t)) CHECK(h.to_double() == doctest::Approx(std::atanh(1.0 / 3)).epsilon(1e-12));

  c.max_applications = BigInt(1000);
  const MapHandle shift = affine(1.0, 1.0);
  const std::vector<XReal> h = hyp_step_series(shift, iterate_exact(shift, c));
  // Real translations are isometries: k(z + 1, z) = arctanh(1 / |1 + 2i|) on Im z = 1.
  CHECK(non_increasing(h, 1e-15));
  for (const XReal& v : h) CHECK(v.to_double() == doctest::Approx(std::atanh(1 / std::sqrt(5.0))).epsilon(1e-12));
}

TEST_CASE("constant direction stub has a single slope") {
  const double th = 1.1;
  const cd dir = std::polar(1.0, th);
  OrbitConfig c = every_step(EngineMode::exact, 100);
  c.z0 = XComplex(dir);
  const SlopeReport r = slope_report(iterate_exact(affine(1.0, dir), c));
  CHECK(r.a_hat == doctest::Approx(th).epsilon(1e-12));
  CHECK(r.b_hat == doctest::Approx(th).epsilon(1e-12));
}

TEST_CASE("insufficient transit") {
  OrbitConfig c = every_step(EngineMode::exact, 10);
  c.z0 = XComplex(512.0);
  const OrbitTrace t = iterate_exact(MapHandle::F(single_term()), c);
  CHECK_THROWS_WITH_AS(slope_report(t, kSym), "insufficient transit", DomainError);
}

TEST_CASE("engine parameter checks") {
  OrbitConfig c;
  c.eta = 0.5;
  CHECK_THROWS_AS(iterate_accelerated(MapHandle::F(single_term()), c), DomainError);
  c.eta = 1e-3;
  c.tol_arg = 0.0;
  CHECK_THROWS_AS(iterate_accelerated(MapHandle::F(single_term()), c), DomainError);
}

TEST_CASE("checkpoints double their spacing by default") {
  OrbitConfig c;
  c.mode = EngineMode::exact;
  c.z0 = XComplex(cd(0, 1));
  c.max_applications = BigInt(1000);
  const OrbitTrace t = iterate_exact(affine(1.0, 1.0), c);
  std::vector<long long> counts;
  for (const Checkpoint& cp : t.checkpoints) counts.push_back(cp.count.convert_to<long long>());
  CHECK(counts == std::vector<long long>{0, 1, 3, 7, 15, 31, 63, 127, 255, 511, 1000});
}
