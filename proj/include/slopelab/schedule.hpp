#pragma once

// Coefficient schedules for the lacunary series
//
//   p(z) = sum_k a_k e^{i theta_k} / (z + gamma_k)^{eps_k}
//
// and finite checks of the conditions that make F(z) = z + p(z) a self-map
// of the cone A_theta with the oscillating orbit behaviour.

#include <optional>
#include <string>
#include <vector>

#include "slopelab/geometry.hpp"
#include "slopelab/xnum.hpp"

namespace slopelab {

struct Term {
  int k;
  PosLog a;      // amplitude a_k
  PosLog gamma;  // shift gamma_k
  double eps;    // exponent eps_k
  double theta;  // phase theta_k

  /// ln(a_k / gamma_k^{eps_k}), the bound on |p_k| over Re z >= 0.
  double ln_weight() const { return a.ln() - eps * gamma.ln(); }
};

/// Asserts a_{l+1}/gamma_{l+1}^{eps_{l+1}} <= ratio_bound * a_l/gamma_l^{eps_l}
/// for every l >= l0, including the terms beyond the explicit list.
struct TailCertificate {
  int l0;
  double ratio_bound;
};

/// Phase forced by the parity law: theta - pi eps for even k, -theta + pi eps for odd k.
double parity_phase(int k, double eps, double theta);

class Schedule {
 public:
  /// Checks structure only: terms numbered 1..K, eps_k > 0, finite phases.
  /// The analytic conditions are checked by validate().
  Schedule(AngleSpec angle, std::vector<Term> terms, std::optional<TailCertificate> tail = std::nullopt);

  const AngleSpec& angle() const { return angle_; }
  double theta() const { return angle_.theta(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& term(int k) const { return terms_.at(static_cast<std::size_t>(k - 1)); }
  int size() const { return static_cast<int>(terms_.size()); }
  const std::optional<TailCertificate>& tail_certificate() const { return tail_; }

  /// Certified bound on sum_{l>K} a_l/gamma_l^{eps_l}; nullopt without a certificate.
  /// Throws DomainError for a malformed certificate.
  std::optional<PosLog> tail_bound() const;

  /// First k terms with no certificate.
  Schedule truncated(int k) const;
  /// Same terms, replacing the certificate.
  Schedule with_certificate(std::optional<TailCertificate> tail) const;

 private:
  AngleSpec angle_;
  std::vector<Term> terms_;
  std::optional<TailCertificate> tail_;
};

/// 1 / sqrt(4 + tan^2 theta). Throws DomainError unless theta in (0, pi/2).
double delta_theta(double theta);

struct ConditionResult {
  std::string id;
  bool passed = false;
  /// Worst-case ln(bound / value); positive means slack.
  double slack_ln = 0.0;
  /// Index attaining the worst slack, 0 if not term specific.
  int worst_k = 0;
  /// Only checked over the explicit terms (no tail certificate).
  bool finite_horizon_only = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;
  bool passed = false;
  bool finite_horizon_only = false;

  const ConditionResult& at(const std::string& id) const;
};

/// Checks positivity and angle caps, the parity phase law, the step budget,
/// gamma growth and both dominance sums, all in log arithmetic.
ValidationReport validate(const Schedule& s);

/// The explicit coefficients eps_k = theta/pi 2^-k, a_k = C1^k (k!)^2,
/// gamma_k^{eps_k} = (C2 k!)^{3^k}.
Schedule example21(const AngleSpec& angle, double c1, double c2, int count);
/// Same, for the symmetric slope interval [pi/2 - theta, pi/2 + theta].
Schedule example21(double theta, double c1, double c2, int count);

struct Example21Constants {
  double c1;
  double c2;
};
/// Smallest pair on a fixed grid for which example21 validates; nullopt if none.
std::optional<Example21Constants> find_example21_constants(const AngleSpec& angle, int count);

/// Builds a desk-scale schedule with slack factor `safety` on every condition.
/// eps_k = (theta/pi) eps_ratio^{-k}; eps_ratio = 2 is the halving law.
/// Throws DomainError for count < 2 or bad parameters and NumericFailure
/// ("schedule overflow") when the shifts leave the exponent range.
Schedule synthesize(const AngleSpec& angle, int count, double safety = 2.0, double eps_ratio = 2.0);

struct L1Report {
  bool passed = false;
  bool finite_horizon_only = false;
  /// sum a_k log(1 + gamma_k^2) / gamma_k^{eps_k}, including any tail estimate.
  PosLog log_sum;
  /// sum a_k / (eps_k gamma_k^{eps_k}), including any tail estimate.
  PosLog eps_sum;
  std::string detail;
};

/// Integrability sums that make the first absolute moment of the boundary
/// measure finite.
L1Report check_l1_condition(const Schedule& s);

/// ln log(1 + e^{2 L}) without overflow.
double ln_log1p_gamma_sq(double ln_gamma);

}  // namespace slopelab
