#pragma once

#include <complex>

#include "slopelab/xnum.hpp"

namespace slopelab {

enum class Membership { inside, boundary, outside };

/// The open symmetric cone {|arg z| < half_angle} about the positive axis.
class Cone {
 public:
  explicit Cone(double half_angle);

  double half_angle() const { return half_angle_; }
  /// Points with |arg z| within `tol` of the half angle count as boundary.
  Membership classify(const XComplex& z, double tol = 0.0) const;
  bool contains(const XComplex& z) const { return classify(z) == Membership::inside; }

 private:
  double half_angle_;
};

/// Slope interval [a,b] inside [0,pi] with the derived cone angle
/// theta = (b-a)/2, rotation phi = a + theta and xi = e^{i phi}.
class AngleSpec {
 public:
  AngleSpec(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double theta() const { return (b_ - a_) / 2.0; }
  double phi() const { return a_ + theta(); }
  std::complex<double> xi() const { return std::polar(1.0, phi()); }

 private:
  double a_;
  double b_;
};

/// {arg z in (-theta - a, pi - theta - a)}, i.e. Im(e^{i(a+theta)} z) > 0. Contains the cone A_theta.
class HalfPlaneH {
 public:
  HalfPlaneH(double a, double theta);
  explicit HalfPlaneH(const AngleSpec& angle) : HalfPlaneH(angle.a(), angle.theta()) {}

  double rotation() const { return a_ + theta_; }
  bool contains(const XComplex& z) const;
  /// Argument of z measured from the boundary ray, in (0, pi) for interior points.
  double interior_angle(const XComplex& z) const;

 private:
  double a_;
  double theta_;
};

/// Hyperbolic distance in the upper half-plane for the density |dz| / (2 Im z):
/// arctanh(|z-w| / |z - conj w|). Throws DomainError off the half-plane.
double hyp_dist(const XComplex& z, const XComplex& w);

/// Distance between z and z + delta, computed from delta directly so the
/// result keeps its precision when |delta| << |z|.
XReal hyp_step(const XComplex& z, const XComplex& delta);

/// S(w) = i (tau + w) / (tau - w). Throws DomainError at the pole w = tau.
XComplex disk_to_halfplane(std::complex<double> w, std::complex<double> tau);
/// Inverse of disk_to_halfplane: tau (z - i) / (z + i).
std::complex<double> halfplane_to_disk(const XComplex& z, std::complex<double> tau);

/// Half-plane slope psi in [0, pi] to the disk approach angle pi/2 - psi.
double slope_halfplane_to_disk(double psi);

}  // namespace slopelab
