#include "slopelab/geometry.hpp"

#include <cmath>
#include <numbers>

#include "slopelab/error.hpp"

namespace slopelab {

using std::numbers::pi;

Cone::Cone(double half_angle) : half_angle_(half_angle) {
  if (!(half_angle > 0.0 && half_angle < pi / 2)) throw DomainError("Cone: half angle must lie in (0, pi/2)");
}

Membership Cone::classify(const XComplex& z, double tol) const {
  if (z.is_zero()) return Membership::boundary;
  double d = std::fabs(z.arg()) - half_angle_;
  if (std::fabs(d) <= tol) return Membership::boundary;
  return d < 0 ? Membership::inside : Membership::outside;
}

AngleSpec::AngleSpec(double a, double b) : a_(a), b_(b) {
  if (!(a >= 0.0 && a < b && b <= pi)) throw DomainError("AngleSpec: need 0 <= a < b <= pi");
  if (a == 0.0 && b == pi) throw DomainError("AngleSpec: [a,b] = [0,pi] is excluded");
}

HalfPlaneH::HalfPlaneH(double a, double theta) : a_(a), theta_(theta) {
  if (!(theta > 0.0 && theta < pi / 2)) throw DomainError("HalfPlaneH: theta must lie in (0, pi/2)");
  if (!(a >= 0.0 && a + 2 * theta <= pi)) throw DomainError("HalfPlaneH: need 0 <= a and a + 2 theta <= pi");
}

bool HalfPlaneH::contains(const XComplex& z) const {
  XComplex r = XComplex(std::polar(1.0, rotation())) * z;
  return r.im.sign() > 0;
}

double HalfPlaneH::interior_angle(const XComplex& z) const {
  return (XComplex(std::polar(1.0, rotation())) * z).arg();
}

namespace {

XReal artanh(const XReal& rho) {
  if (rho < XReal(1e-8)) return rho + rho * rho * rho / XReal(3.0);
  return XReal(std::atanh(rho.to_double()));
}

}  // namespace

double hyp_dist(const XComplex& z, const XComplex& w) {
  if (z.im.sign() <= 0 || w.im.sign() <= 0) throw DomainError("hyp_dist: points must lie in the upper half-plane");
  XReal num = (z - w).abs();
  if (num.is_zero()) return 0.0;
  XReal rho = num / (z - w.conj()).abs();
  return artanh(rho).to_double();
}

XReal hyp_step(const XComplex& z, const XComplex& delta) {
  if (z.im.sign() <= 0 || (z + delta).im.sign() <= 0) {
    throw DomainError("hyp_step: points must lie in the upper half-plane");
  }
  XReal num = delta.abs();
  if (num.is_zero()) return {};
  // z - conj(z + delta) = 2i Im z - conj(delta); same modulus as delta + 2i Im z.
  XComplex den = delta + XComplex(XReal(), z.im * XReal(2.0));
  return artanh(num / den.abs());
}

XComplex disk_to_halfplane(std::complex<double> w, std::complex<double> tau) {
  if (std::abs(w - tau) == 0.0) throw DomainError("disk_to_halfplane: pole at w = tau");
  return XComplex(std::complex<double>(0.0, 1.0) * (tau + w) / (tau - w));
}

std::complex<double> halfplane_to_disk(const XComplex& z, std::complex<double> tau) {
  XComplex i(XReal(), XReal(1.0));
  XComplex q = (z - i) / (z + i);
  return tau * q.to_complex();
}

double slope_halfplane_to_disk(double psi) {
  if (!(psi >= 0.0 && psi <= pi)) throw DomainError("slope must lie in [0, pi]");
  return pi / 2 - psi;
}

}  // namespace slopelab
