#pragma once

// Forward orbits of the schedule maps and of plain test maps.
//
// The accelerated engine advances m applications at once using the frozen
// step p(z) with a second-order correction, where m is capped so that
// m |p'(z)| <= eta. Counts are exact big integers throughout.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "slopelab/bigcount.hpp"
#include "slopelab/holomap.hpp"

namespace slopelab {

enum class EngineMode { exact, accelerated };

struct Checkpoint {
  BigInt count;
  /// Iterate in the map's own coordinates.
  XComplex z;
  /// Index k when the point lies in Omega_k, 0 otherwise.
  int region_k = 0;
  std::optional<double> abs_Rk;
  /// k_H(map(z), z); empty when the map has no half-plane frame.
  std::optional<XReal> hyp_step;

  double arg() const { return z.arg(); }
  double log10_abs() const;
};

struct RegionEvent {
  int k = 0;
  BigInt entry_count;
  std::optional<BigInt> exit_count;
  XComplex entry_z;
  std::optional<XComplex> exit_z;
  /// Arguments in the coordinates where the cone is symmetric about the real axis.
  double entry_arg = 0.0;
  std::optional<double> exit_arg;
  /// Re(entry) - gamma_k in the symmetric coordinates.
  XReal entry_overshoot;
  /// Size of the superstep that crossed the boundary; 0 for single applications.
  BigInt entry_uncertainty;
  BigInt exit_uncertainty;
  double max_ratio = 0.0;
  /// exit_band(s, k) for this region.
  double band = 0.0;
  /// Worst arg(p) - band (even k) or band - arg(p) (odd k) seen during the transit.
  double min_quotient_slack = 1e300;
  long long quotient_violations = 0;
};

struct OrbitConfig {
  /// Starting point in the map's coordinates. Empty means gamma_1/2, moved
  /// into the map's frame.
  std::optional<XComplex> z0;
  EngineMode mode = EngineMode::accelerated;
  double tol_arg = 1e-6;
  double eta = 1e-3;
  /// Empty means unlimited; required for maps without regions.
  std::optional<BigInt> max_applications;
  BigInt checkpoint_stride = 1;
  /// Double the stride after every checkpoint.
  bool geometric_checkpoints = true;
  /// Slope extremes are collected from the first entry into this region
  /// (schedule maps) ...
  int tail_region = 2;
  /// ... or from this application count (other maps).
  BigInt tail_from = 0;
  /// Called for each checkpoint as it is produced.
  std::function<void(const Checkpoint&)> sink;
  bool store_checkpoints = true;
};

struct OrbitTrace {
  std::string map_name;
  MapVariant variant = MapVariant::custom;
  /// Angle added to map-coordinate arguments to reach upper half-plane coordinates.
  double f_shift = 0.0;
  std::vector<Checkpoint> checkpoints;
  std::vector<RegionEvent> events;
  XComplex last_z;
  BigInt applications;
  /// Sum of all superstep sizes, kept separately from `applications`.
  BigInt superstep_total;
  long long supersteps = 0;
  /// Every region of the schedule was crossed.
  bool complete = false;
  /// The budget ran out first.
  bool incomplete = false;

  // Running extremes of the argument in map coordinates.
  double min_arg = 1e300;
  double max_arg = -1e300;
  double tail_min_arg = 1e300;
  double tail_max_arg = -1e300;
  long long tail_points = 0;

  /// Largest Re p(z) / (gamma_1 / 2) over the visited points.
  double max_step_ratio = 0.0;
  /// Smallest Re p(z) seen, relative to |p(z)|.
  double min_step_cos = 1e300;
};

/// One application at a time. Throws NumericFailure when a runtime check
/// fails: x not strictly increasing, a step above gamma_1/2, or leaving the cone.
OrbitTrace iterate_exact(const MapHandle& map, const OrbitConfig& cfg);

/// Supersteps for schedule maps. Throws DomainError for Wolff and custom maps.
OrbitTrace iterate_accelerated(const MapHandle& map, const OrbitConfig& cfg);

/// Dispatch on cfg.mode.
OrbitTrace iterate(const MapHandle& map, const OrbitConfig& cfg);

/// sum_{l != k} p_l(z) / p_k(z) over the explicit terms.
std::complex<double> ratio_Rk(const Schedule& s, int k, const XComplex& z);

/// theta - 2 pi eps_k - 2/k: lower bound on the argument of steps and exits in
/// Omega_k for even k; the negative is the upper bound for odd k.
double exit_band(const Schedule& s, int k);

struct ExitCheck {
  int k = 0;
  double arg = 0.0;
  double band = 0.0;
  bool passed = false;
};

struct SlopeReport {
  std::vector<ExitCheck> exits;
  bool exits_in_band = true;
  /// Extremes over the trace tail in upper half-plane coordinates.
  double a_hat = 0.0;
  double b_hat = 0.0;
  /// Extremes over every visited point, same coordinates.
  double min_arg = 0.0;
  double max_arg = 0.0;
  bool within_angle = true;
  std::vector<XReal> hyp_steps;
};

/// Throws DomainError("insufficient transit") for schedule traces with fewer
/// than two region events or other traces with fewer than two tail points.
SlopeReport slope_report(const OrbitTrace& trace, const AngleSpec& angle, double tol_arg = 1e-6);
/// For traces of maps without an angle: only tail extremes are reported.
SlopeReport slope_report(const OrbitTrace& trace, double tol_arg = 1e-6);

/// k_H(map(z), z) at each checkpoint, in half-plane coordinates.
std::vector<XReal> hyp_step_series(const MapHandle& map, const OrbitTrace& trace);

/// True when the sequence never increases by more than `slack`.
bool non_increasing(const std::vector<XReal>& v, double slack);

}  // namespace slopelab
