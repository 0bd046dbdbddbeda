#pragma once

// Boundary measure of f(z) = z + xi p(conj(xi) z) on the upper half-plane.
//
// mu has density v*(t) / (pi (1 + t^2)) with v*(t) = Im(xi p(conj(xi) t)).
// Integrals over the line are split into |t| <= 1 and |t| = e^u, u in [0, U],
// with an analytic bound for u > U. The measure is the one of the finite
// K-term map; a tail certificate does not enter here.

#include <complex>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "slopelab/holomap.hpp"
#include "slopelab/schedule.hpp"

namespace slopelab {

struct QuadOptions {
  /// Relative tolerance handed to each Gauss-Kronrod panel.
  double rel_tol = 1e-11;
  /// Absolute target for the analytic tail beyond U.
  double tail_target = 1e-13;
  /// U is at least ln of this.
  double min_T = 1e6;
  unsigned max_depth = 18;
  int threads = 1;
};

struct QuadResult {
  std::complex<double> value;
  /// Panel errors + tail bound + roundoff floor.
  double error = 0.0;
  double tail_bound = 0.0;
  /// Integral of the modulus, for roundoff scaling.
  double l1 = 0.0;
  /// ln T of the cut-off.
  double U = 0.0;
  int panels = 0;
};

/// v*(t) / (pi (1 + t^2)). Values in [-1e-12, 0) are clamped to 0; anything
/// lower throws NumericFailure.
double boundary_density(const Schedule& s, const AngleSpec& angle, double t);

/// v*(t) itself.
double boundary_value(const Schedule& s, const AngleSpec& angle, double t);

struct TermMomentBound {
  int k = 0;
  double central = 0.0;
  double right = 0.0;
  double left = 0.0;
};

/// Per-term estimates of int |t| / ((1 + t^2) |conj(xi) t + gamma_k|^{eps_k}) dt
/// times a_k over [-gamma_k, gamma_k], [gamma_k, inf) and (-inf, -gamma_k].
/// They bound pi * int |t| dmu.
struct MomentBoundReport {
  std::vector<TermMomentBound> terms;
  double total = 0.0;
};

MomentBoundReport moment_bounds(const Schedule& s, const AngleSpec& angle);

struct MomentResult {
  double value = 0.0;
  double error = 0.0;
  /// check_l1_condition passed.
  bool certified = false;
  std::optional<L1Report> l1;
  MomentBoundReport bounds;
  QuadResult quad;
};

/// int |t| dmu.
MomentResult moment_abs(const Schedule& s, const AngleSpec& angle, const QuadOptions& opt = {});

struct BetaResult {
  double value = 0.0;
  double error = 0.0;
};

/// int t dmu. Throws DomainError when the first moment is not certified.
BetaResult beta_of(const Schedule& s, const AngleSpec& angle, const QuadOptions& opt = {});

struct ReconstructPoint {
  std::complex<double> z;
  /// f(z) - z from the series.
  std::complex<double> direct;
  /// int (1 + t^2) / (t - z) dmu.
  std::complex<double> reconstructed;
  double rel_error = 0.0;
  /// Quadrature error estimate relative to |direct|.
  double rel_estimate = 0.0;
};

struct ReconstructResult {
  std::vector<ReconstructPoint> points;
  double max_rel_error = 0.0;
  double max_rel_estimate = 0.0;
  /// max_rel_error <= tol with tol > 0.
  bool passed = false;
};

/// Compares f(z) - z with its boundary-measure integral. Requires Im z > 0.
ReconstructResult reconstruct_check(const Schedule& s, const AngleSpec& angle, std::span<const std::complex<double>> Z,
                                    double tol, const QuadOptions& opt = {});
/// Throws DomainError("unsupported variant") for maps without a schedule.
ReconstructResult reconstruct_check(const MapHandle& map, std::span<const std::complex<double>> Z, double tol,
                                    const QuadOptions& opt = {});

struct PoissonPoint {
  std::complex<double> z;
  /// Im(f(z) - z).
  double direct = 0.0;
  /// int (1 + t^2) y / ((t - x)^2 + y^2) dmu.
  double integral = 0.0;
  double error_estimate = 0.0;
};

std::vector<PoissonPoint> poisson_check(const Schedule& s, const AngleSpec& angle,
                                        std::span<const std::complex<double>> Z, const QuadOptions& opt = {});

/// Numerical values of the three majorant integrals behind moment_bounds for
/// term k, the outer two cut at u_max = ln T.
TermMomentBound majorant_integrals(const Schedule& s, const AngleSpec& angle, int k, double u_max,
                                   const QuadOptions& opt = {});

/// "t,density" rows with 17 significant digits.
void write_density_csv(std::ostream& os, const Schedule& s, const AngleSpec& angle, std::span<const double> ts);

/// An even density for parity checks: int |t| and int t of a density given on t >= 0 mirrored.
struct ParityMoments {
  double abs_moment = 0.0;
  double signed_moment = 0.0;
};
ParityMoments mirrored_moments(const std::function<double(double)>& density_pos, double t_max, const QuadOptions& opt = {});

}  // namespace slopelab
