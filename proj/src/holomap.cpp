#include "slopelab/holomap.hpp"

#include <cmath>
#include <numbers>

#include "slopelab/error.hpp"

namespace slopelab {

using std::numbers::pi;

std::string to_string(MapVariant v) {
  switch (v) {
    case MapVariant::F_on_Omega: return "F";
    case MapVariant::g_on_H: return "g";
    case MapVariant::f_on_UHP: return "f";
    case MapVariant::wolff: return "wolff";
    case MapVariant::custom: return "custom";
  }
  return "?";
}

MapHandle MapHandle::F(Schedule s) {
  MapHandle m;
  m.variant_ = MapVariant::F_on_Omega;
  m.schedule_ = std::make_shared<const Schedule>(std::move(s));
  m.name_ = "F";
  m.uhp_ = false;
  return m;
}

MapHandle MapHandle::g(Schedule s) {
  MapHandle m = F(std::move(s));
  m.variant_ = MapVariant::g_on_H;
  m.name_ = "g";
  return m;
}

MapHandle MapHandle::f(Schedule s) {
  MapHandle m = F(std::move(s));
  m.variant_ = MapVariant::f_on_UHP;
  m.name_ = "f";
  m.uhp_ = true;
  return m;
}

MapHandle MapHandle::wolff() {
  MapHandle m;
  m.variant_ = MapVariant::wolff;
  m.name_ = "wolff";
  return m;
}

MapHandle MapHandle::custom(std::string name, Fn fn, bool upper_half_plane) {
  MapHandle m;
  m.variant_ = MapVariant::custom;
  m.fn_ = std::move(fn);
  m.name_ = std::move(name);
  m.uhp_ = upper_half_plane;
  return m;
}

const Schedule& MapHandle::schedule() const {
  if (!schedule_) throw DomainError("map '" + name_ + "' has no schedule");
  return *schedule_;
}

std::complex<double> MapHandle::frame() const {
  if (variant_ == MapVariant::f_on_UHP) return schedule_->angle().xi();
  return {1.0, 0.0};
}

XComplex MapHandle::apply(const XComplex& z) const {
  switch (variant_) {
    case MapVariant::F_on_Omega: return eval_F(*schedule_, z).value;
    case MapVariant::g_on_H:
      if (!HalfPlaneH(schedule_->angle()).contains(z)) throw DomainError("g: point outside H");
      return eval_F(*schedule_, z).value;
    case MapVariant::f_on_UHP: return eval_f(*schedule_, schedule_->angle(), z).value;
    case MapVariant::wolff: return eval_wolff(z);
    case MapVariant::custom: return fn_(z);
  }
  throw DomainError("unknown map variant");
}

namespace {

XComplex shifted(const Schedule& s, int k, const XComplex& z) {
  XComplex w = z + XComplex(s.term(k).gamma.value());
  if (w.im.is_zero() && w.re.sign() <= 0) throw BranchCutError();
  return w;
}

XComplex term_at(const Term& t, const XComplex& w) {
  return polar(XReal::exp(t.a.ln() - t.eps * w.log_abs()), t.theta - t.eps * w.arg());
}

// Factor by which the tail bound grows at z: |z + gamma_l| >= gamma_l for
// Re z >= 0 and >= gamma_l / 2 for |z| <= gamma_K^2 / 2 (every gamma_l > gamma_K^2).
XReal tail_factor(const Schedule& s, const XComplex& z) {
  if (z.re.sign() >= 0) return XReal(1.0);
  XReal gk = s.terms().back().gamma.value();
  if (z.abs() * XReal(2.0) <= gk * gk) return XReal(2.0);
  throw DomainError("point outside the radius covered by the tail certificate");
}

}  // namespace

XComplex eval_term(const Schedule& s, int k, const XComplex& z) {
  if (k < 1 || k > s.size()) throw DomainError("eval_term: index out of range");
  return term_at(s.term(k), shifted(s, k, z));
}

SeriesSample sample_series(const Schedule& s, const XComplex& z) {
  SeriesSample out;
  out.terms.reserve(static_cast<std::size_t>(s.size()));
  for (const Term& t : s.terms()) {
    XComplex w = shifted(s, t.k, z);
    XComplex v = term_at(t, w);
    out.terms.push_back(v);
    out.sum += v;
    // p_k' = -eps_k p_k / (z + gamma_k)
    XComplex d = v / w;
    out.derivative -= d * XReal(t.eps);
    out.deriv_bound += d.abs() * XReal(t.eps);
  }
  if (auto tail = s.tail_bound()) {
    XReal f = tail_factor(s, z);
    XReal gk = s.terms().back().gamma.value();
    out.trunc_bound = f * tail->value();
    // eps_l a_l / |z + gamma_l|^{1+eps_l} <= 2 f t_l / gamma_l and gamma_l > gamma_K^2.
    out.deriv_bound += XReal(2.0) * f * tail->value() / (gk * gk);
  }
  return out;
}

EvalResult eval_p(const Schedule& s, const XComplex& z) {
  EvalResult r;
  for (const Term& t : s.terms()) r.value += term_at(t, shifted(s, t.k, z));
  r.terms_used = s.size();
  if (auto tail = s.tail_bound()) r.trunc_bound = tail_factor(s, z) * tail->value();
  return r;
}

EvalResult eval_F(const Schedule& s, const XComplex& z) {
  EvalResult r = eval_p(s, z);
  r.value += z;
  return r;
}

EvalResult eval_f(const Schedule& s, const AngleSpec& angle, const XComplex& z) {
  if (z.im.sign() <= 0) throw DomainError("eval_f: Im z must be positive");
  if (std::fabs(angle.theta() - s.theta()) > 1e-12) throw DomainError("eval_f: angle does not match the schedule");
  XComplex xi(angle.xi());
  EvalResult r = eval_p(s, xi.conj() * z);
  r.value = z + xi * r.value;
  if (r.value.im.sign() <= 0) throw NumericFailure("eval_f: rounding left the upper half-plane");
  return r;
}

XComplex eval_wolff(const XComplex& z) {
  if (z.is_zero()) throw DomainError("eval_wolff: z = 0");
  if (z.im.sign() <= 0) throw DomainError("eval_wolff: Im z must be positive");
  static const XComplex c(XReal(), XReal(std::exp(pi / 2)));
  return z + c * principal_pow_imag(z) + c;
}

std::vector<double> parabolicity_probe(const MapHandle& map, std::span<const XComplex> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  const XComplex one(XReal(1.0));
  for (const XComplex& z : samples) out.push_back((map.apply(z) / z - one).abs().to_double());
  return out;
}

PosLog deriv_bound_p(const Schedule& s, const XComplex& z) {
  return PosLog::from_xreal(sample_series(s, z).deriv_bound);
}

}  // namespace slopelab
