#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "slopelab/geometry.hpp"
#include "slopelab/schedule.hpp"
#include "slopelab/xnum.hpp"

namespace slopelab {

enum class MapVariant { F_on_Omega, g_on_H, f_on_UHP, wolff, custom };

std::string to_string(MapVariant v);

/// One of the self-maps built from a schedule, Wolff's map, or a caller
/// supplied test map. Cheap to copy.
class MapHandle {
 public:
  using Fn = std::function<XComplex(const XComplex&)>;

  /// F(z) = z + p(z) on the slit plane.
  static MapHandle F(Schedule s);
  /// F restricted to the half-plane H containing A_theta.
  static MapHandle g(Schedule s);
  /// f(z) = xi g(conj(xi) z) on the upper half-plane, xi from the schedule's angle.
  static MapHandle f(Schedule s);
  static MapHandle wolff();
  /// Test stub. `upper_half_plane` marks maps whose orbits live in the upper half-plane.
  static MapHandle custom(std::string name, Fn fn, bool upper_half_plane = true);

  MapVariant variant() const { return variant_; }
  bool has_schedule() const { return schedule_ != nullptr; }
  /// Throws DomainError for maps without a schedule.
  const Schedule& schedule() const;
  const std::string& name() const { return name_; }
  bool upper_half_plane() const { return uhp_; }

  /// Rotation taking F coordinates to this map's coordinates: xi for f, 1 otherwise.
  std::complex<double> frame() const;

  XComplex apply(const XComplex& z) const;

 private:
  MapHandle() = default;
  MapVariant variant_ = MapVariant::custom;
  std::shared_ptr<const Schedule> schedule_;
  Fn fn_;
  std::string name_;
  bool uhp_ = true;
};

struct EvalResult {
  XComplex value;
  /// Bound on the modulus of the dropped tail; zero for a finite schedule.
  XReal trunc_bound;
  int terms_used = 0;
};

/// a_k e^{i theta_k} (z + gamma_k)^{-eps_k}. Throws BranchCutError when z + gamma_k <= 0.
XComplex eval_term(const Schedule& s, int k, const XComplex& z);

/// The explicit partial sum of p with its truncation bound.
EvalResult eval_p(const Schedule& s, const XComplex& z);
EvalResult eval_F(const Schedule& s, const XComplex& z);
/// f(z) = z + xi p(conj(xi) z). Throws DomainError for Im z <= 0 or an angle
/// whose theta differs from the schedule's, NumericFailure if rounding pushes
/// the value off the half-plane.
EvalResult eval_f(const Schedule& s, const AngleSpec& angle, const XComplex& z);
/// z + i e^{pi/2} z^i + i e^{pi/2}.
XComplex eval_wolff(const XComplex& z);

/// |map(z)/z - 1| at each sample.
std::vector<double> parabolicity_probe(const MapHandle& map, std::span<const XComplex> samples);

/// Upper bound on |p'(z)|: sum eps_k a_k / |z + gamma_k|^{1 + eps_k} plus the certified tail.
PosLog deriv_bound_p(const Schedule& s, const XComplex& z);

/// Everything the orbit engine needs from one pass over the terms.
struct SeriesSample {
  std::vector<XComplex> terms;
  XComplex sum;
  /// p'(z) of the explicit terms.
  XComplex derivative;
  /// Upper bound on |p'(z)| including the tail.
  XReal deriv_bound;
  XReal trunc_bound;
};

SeriesSample sample_series(const Schedule& s, const XComplex& z);

}  // namespace slopelab
