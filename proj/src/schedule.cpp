#include "slopelab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "slopelab/error.hpp"

namespace slopelab {

using std::numbers::pi;

namespace {

constexpr double kPhaseTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Keeps gamma_K^2 well inside the XReal exponent range.
constexpr double kMaxLnGamma = 1e17;

}  // namespace

double parity_phase(int k, double eps, double theta) {
  return k % 2 == 0 ? theta - pi * eps : -theta + pi * eps;
}

Schedule::Schedule(AngleSpec angle, std::vector<Term> terms, std::optional<TailCertificate> tail)
    : angle_(angle), terms_(std::move(terms)), tail_(tail) {
  if (terms_.empty()) throw DomainError("Schedule: no terms");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (t.k != static_cast<int>(i) + 1) throw DomainError("Schedule: terms must be numbered 1..K in order");
    if (!(t.eps > 0.0) || !std::isfinite(t.eps)) throw DomainError("Schedule: eps_k must be positive");
    if (!std::isfinite(t.theta)) throw DomainError("Schedule: non-finite phase");
  }
}

std::optional<PosLog> Schedule::tail_bound() const {
  if (!tail_) return std::nullopt;
  double r = tail_->ratio_bound;
  if (!(r > 0.0 && r < 1.0)) throw DomainError("tail certificate: ratio_bound must lie in (0, 1)");
  if (tail_->l0 < 1 || tail_->l0 > size()) throw DomainError("tail certificate: l0 must index an explicit term");
  return PosLog::from_ln(terms_.back().ln_weight() + std::log(r) - std::log1p(-r));
}

Schedule Schedule::truncated(int k) const {
  if (k < 1 || k > size()) throw DomainError("truncated: bad term count");
  return Schedule(angle_, std::vector<Term>(terms_.begin(), terms_.begin() + k));
}

Schedule Schedule::with_certificate(std::optional<TailCertificate> tail) const {
  return Schedule(angle_, terms_, tail);
}

double delta_theta(double theta) {
  if (!(theta > 0.0 && theta < pi / 2)) throw DomainError("delta_theta: theta must lie in (0, pi/2)");
  double t = std::tan(theta);
  return 1.0 / std::sqrt(4.0 + t * t);
}

const ConditionResult& ValidationReport::at(const std::string& id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return c;
  }
  throw DomainError("no condition " + id);
}

double ln_log1p_gamma_sq(double ln_gamma) {
  double two_l = 2.0 * ln_gamma;
  if (two_l > 36.0) return std::log(two_l + std::log1p(std::exp(-two_l)));
  if (two_l < -700.0) return two_l;
  return std::log(std::log1p(std::exp(two_l)));
}

ValidationReport validate(const Schedule& s) {
  const auto& terms = s.terms();
  const int count = s.size();
  const double theta = s.theta();
  const double delta = delta_theta(theta);
  const std::optional<PosLog> tail = s.tail_bound();
  const bool finite_only = !tail.has_value();

  ValidationReport rep;
  rep.finite_horizon_only = finite_only;

  {
    ConditionResult c;
    c.id = "4";
    c.passed = true;
    c.slack_ln = kInf;
    std::ostringstream why;
    for (const Term& t : terms) {
      double slack = std::log(theta / (pi * t.eps));
      if (slack < c.slack_ln) {
        c.slack_ln = slack;
        c.worst_k = t.k;
      }
      if (pi * t.eps > theta || t.eps >= 1.0) {
        c.passed = false;
        why << "pi*eps_" << t.k << " exceeds theta; ";
      }
      if (t.k > 1 && !(t.eps < terms[t.k - 2].eps)) {
        c.passed = false;
        why << "eps_" << t.k << " not strictly decreasing; ";
      }
    }
    c.detail = why.str();
    rep.conditions.push_back(c);
  }

  {
    ConditionResult c;
    c.id = "5";
    double worst = 0.0;
    for (const Term& t : terms) {
      double dev = std::fabs(t.theta - parity_phase(t.k, t.eps, theta));
      if (dev > worst) {
        worst = dev;
        c.worst_k = t.k;
      }
    }
    c.passed = worst <= kPhaseTol;
    c.slack_ln = std::log(kPhaseTol / std::max(worst, 1e-300));
    if (!c.passed) c.detail = "phase deviates from the parity law by " + std::to_string(worst);
    rep.conditions.push_back(c);
  }

  std::vector<PosLog> weights;
  weights.reserve(terms.size() + 1);
  for (const Term& t : terms) weights.push_back(PosLog::from_ln(t.ln_weight()));

  {
    ConditionResult c;
    c.id = "6";
    std::vector<PosLog> all = weights;
    if (tail) all.push_back(*tail);
    double total = plog_sum(all).ln();
    c.slack_ln = terms[0].gamma.ln() - std::log(2.0) - total;
    c.passed = c.slack_ln >= 0.0;
    c.finite_horizon_only = finite_only;
    rep.conditions.push_back(c);
  }

  {
    ConditionResult c;
    c.id = "7";
    c.slack_ln = terms[0].gamma.ln() - std::log(2.0);
    c.passed = c.slack_ln >= 0.0;
    c.worst_k = 1;
    for (int k = 1; k < count; ++k) {
      double slack = terms[k].gamma.ln() - 2.0 * terms[k - 1].gamma.ln();
      if (!(slack > 0.0)) c.passed = false;
      if (slack < c.slack_ln) {
        c.slack_ln = slack;
        c.worst_k = k + 1;
      }
    }
    if (!c.passed) c.detail = "need gamma_1 >= 2 and gamma_{k+1} > gamma_k^2";
    rep.conditions.push_back(c);
  }

  auto bound_ln = [&](const Term& t) {
    return std::log(delta) + t.a.ln() - std::log(2.0 * t.k) - 2.0 * t.eps * t.gamma.ln();
  };

  {
    ConditionResult c;
    c.id = "8_prefix";
    c.slack_ln = kInf;
    for (int k = 2; k <= count; ++k) {
      const Term& tk = terms[k - 1];
      std::vector<PosLog> parts;
      for (int l = 1; l < k; ++l) {
        const Term& tl = terms[l - 1];
        parts.push_back(PosLog::from_ln(tl.a.ln() - tl.eps * tk.gamma.ln()));
      }
      double slack = bound_ln(tk) - plog_sum(parts).ln();
      if (slack < c.slack_ln) {
        c.slack_ln = slack;
        c.worst_k = k;
      }
    }
    c.passed = c.slack_ln >= 0.0;
    rep.conditions.push_back(c);
  }

  {
    ConditionResult c;
    c.id = "8_suffix";
    c.slack_ln = kInf;
    c.finite_horizon_only = finite_only;
    for (int k = 1; k <= count; ++k) {
      std::vector<PosLog> parts(weights.begin() + k, weights.end());
      if (tail) parts.push_back(*tail);
      if (parts.empty()) continue;
      double slack = bound_ln(terms[k - 1]) - plog_sum(parts).ln();
      if (slack < c.slack_ln) {
        c.slack_ln = slack;
        c.worst_k = k;
      }
    }
    c.passed = c.slack_ln >= 0.0;
    rep.conditions.push_back(c);
  }

  if (const auto& cert = s.tail_certificate()) {
    ConditionResult c;
    c.id = "tail_certificate";
    c.passed = true;
    c.slack_ln = kInf;
    double lr = std::log(cert->ratio_bound);
    for (int l = cert->l0; l < count; ++l) {
      double slack = lr - (terms[l].ln_weight() - terms[l - 1].ln_weight());
      if (slack < c.slack_ln) {
        c.slack_ln = slack;
        c.worst_k = l + 1;
      }
      if (slack < 0.0) c.passed = false;
    }
    if (!c.passed) c.detail = "explicit terms contradict the certified decay ratio";
    rep.conditions.push_back(c);
  }

  rep.passed = std::all_of(rep.conditions.begin(), rep.conditions.end(), [](const auto& c) { return c.passed; });
  return rep;
}

Schedule example21(const AngleSpec& angle, double c1, double c2, int count) {
  if (count < 1) throw DomainError("example21: need at least one term");
  if (!(c1 > 1.0 && c2 > 1.0)) throw DomainError("example21: constants must exceed 1");
  const double theta = angle.theta();
  std::vector<Term> terms;
  for (int k = 1; k <= count; ++k) {
    double eps = theta / pi * std::ldexp(1.0, -k);
    double lnfact = std::lgamma(k + 1.0);
    double ln_a = k * std::log(c1) + 2.0 * lnfact;
    double ln_gamma_eps = std::pow(3.0, k) * (std::log(c2) + lnfact);
    terms.push_back(Term{k, PosLog::from_ln(ln_a), PosLog::from_ln(ln_gamma_eps / eps), eps,
                         parity_phase(k, eps, theta)});
  }
  return Schedule(angle, std::move(terms));
}

Schedule example21(double theta, double c1, double c2, int count) {
  return example21(AngleSpec(pi / 2 - theta, pi / 2 + theta), c1, c2, count);
}

std::optional<Example21Constants> find_example21_constants(const AngleSpec& angle, int count) {
  static constexpr double grid[] = {1.5, 2, 3, 5, 10, 20, 50, 100, 1000};
  // Scan by increasing product so the first hit is small in both constants.
  std::vector<Example21Constants> pairs;
  for (double c1 : grid) {
    for (double c2 : grid) pairs.push_back({c1, c2});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return x.c1 * x.c2 < y.c1 * y.c2; });
  for (const auto& p : pairs) {
    try {
      if (validate(example21(angle, p.c1, p.c2, count)).passed) return p;
    } catch (const DomainError&) {
    }
  }
  return std::nullopt;
}

Schedule synthesize(const AngleSpec& angle, int count, double safety, double eps_ratio) {
  if (count < 2) throw DomainError("synthesize: need K >= 2");
  if (!(safety > 1.0)) throw DomainError("synthesize: safety must exceed 1");
  if (!(eps_ratio >= 2.0)) throw DomainError("synthesize: eps_ratio must be at least 2");

  const double theta = angle.theta();
  const double delta = delta_theta(theta);
  const double ls = std::log(safety);
  const double ln2 = std::log(2.0);

  std::vector<double> eps(count + 1), ln_a(count + 1), ln_g(count + 1), budget(count + 1);
  for (int k = 1; k <= count; ++k) eps[k] = theta / pi * std::pow(eps_ratio, -k);

  // B_k: ln of the dominance bound Delta a_k / (2k gamma_k^{2 eps_k}).
  auto bound_ln = [&](int k) { return std::log(delta) + ln_a[k] - std::log(2.0 * k) - 2.0 * eps[k] * ln_g[k]; };

  // Term 1: the later terms fit in term 1's suffix budget, which is below
  // Delta/2 times term 1's own weight, so the step condition needs
  // safety * (1 + Delta/(2 safety)) gamma_1^{-eps_1} <= gamma_1 / 2.
  ln_a[1] = 0.0;
  ln_g[1] = std::max(ln2 + ls, std::log(2.0 * safety + delta) / (1.0 + eps[1]));
  budget[1] = bound_ln(1) - ls;

  double sum_a = 1.0;  // running sum of a_l, l < k
  for (int k = 2; k <= count; ++k) {
    // eps_l >= 2 eps_k for l < k, so sum_l a_l gamma_k^{-eps_l} <= gamma_k^{-2 eps_k} sum_l a_l.
    ln_a[k] = std::log(sum_a) + std::log(2.0 * k) - std::log(delta) + ls;
    // Term k takes a 2^{-(k-j)} share of every earlier suffix budget.
    double cap = std::numeric_limits<double>::infinity();
    for (int j = 1; j < k; ++j) cap = std::min(cap, budget[j] - (k - j) * ln2);
    ln_g[k] = std::max(2.0 * ln_g[k - 1] + ls, (ln_a[k] - cap) / eps[k]);
    if (!(ln_g[k] < kMaxLnGamma)) throw NumericFailure("schedule overflow");
    budget[k] = bound_ln(k) - ls;
    sum_a += std::exp(ln_a[k]);
    if (!std::isfinite(sum_a)) throw NumericFailure("schedule overflow");
  }

  std::vector<Term> terms;
  for (int k = 1; k <= count; ++k) {
    terms.push_back(Term{k, PosLog::from_ln(ln_a[k]), PosLog::from_ln(ln_g[k]), eps[k],
                         parity_phase(k, eps[k], theta)});
  }
  Schedule s(angle, std::move(terms));
  if (!validate(s).passed) throw NumericFailure("synthesize: result failed validation");
  return s;
}

L1Report check_l1_condition(const Schedule& s) {
  std::vector<PosLog> log_terms, eps_terms;
  for (const Term& t : s.terms()) {
    double w = t.ln_weight();
    log_terms.push_back(PosLog::from_ln(w + ln_log1p_gamma_sq(t.gamma.ln())));
    eps_terms.push_back(PosLog::from_ln(w - std::log(t.eps)));
  }
  L1Report rep{false, false, plog_sum(log_terms), plog_sum(eps_terms), ""};
  const auto& cert = s.tail_certificate();
  if (!cert) {
    rep.passed = true;
    rep.finite_horizon_only = true;
    rep.detail = "finite-horizon only";
    return rep;
  }
  // The certificate bounds the plain weights; carry its ratio over to the
  // weighted sequences only if the explicit terms already obey it.
  s.tail_bound();
  double lr = std::log(cert->ratio_bound);
  for (int l = cert->l0; l < s.size(); ++l) {
    if (log_terms[l].ln() - log_terms[l - 1].ln() > lr || eps_terms[l].ln() - eps_terms[l - 1].ln() > lr) {
      rep.detail = "certificate ratio does not cover the weighted sums";
      return rep;
    }
  }
  double geo = lr - std::log1p(-cert->ratio_bound);
  rep.log_sum = rep.log_sum + PosLog::from_ln(log_terms.back().ln() + geo);
  rep.eps_sum = rep.eps_sum + PosLog::from_ln(eps_terms.back().ln() + geo);
  rep.passed = true;
  rep.detail = "tail extrapolated with the certificate ratio";
  return rep;
}

}  // namespace slopelab
