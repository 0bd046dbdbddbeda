#include "slopelab/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <set>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slopelab/error.hpp"

namespace slopelab {

using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

void check_angle(const Schedule& s, const AngleSpec& angle) {
  if (std::fabs(angle.theta() - s.theta()) > 1e-12) throw DomainError("angle does not match the schedule");
}

// v*(t) at t = sigma e^u, exact for any u.
double vstar_outer(const Schedule& s, const XComplex& xibar, const XComplex& xi, int sigma, double u) {
  XReal t = XReal::exp(u);
  if (sigma < 0) t = -t;
  return (xi * eval_p(s, xibar * XComplex(t)).value).im.to_double();
}

double vstar_inner(const Schedule& s, const XComplex& xibar, const XComplex& xi, double t) {
  return (xi * eval_p(s, xibar * XComplex(XReal(t))).value).im.to_double();
}

struct Panel {
  int sigma;  // 0 for the inner piece in t, +-1 for t = +-e^u
  double lo;
  double hi;
};

struct PanelResult {
  cplx value;
  double error = 0.0;
  double l1 = 0.0;
};

using PanelFn = std::function<cplx(int sigma, double x)>;

PanelResult integrate_panel(const PanelFn& fn, const Panel& pn, const QuadOptions& opt) {
  using boost::math::quadrature::gauss_kronrod;
  PanelResult r;
  double err_re = 0.0, err_im = 0.0, l1_re = 0.0, l1_im = 0.0;
  // Real and imaginary parts separately; Boost's error control is for real integrands.
  auto re = [&](double x) { return fn(pn.sigma, x).real(); };
  auto im = [&](double x) { return fn(pn.sigma, x).imag(); };
  double vr = gauss_kronrod<double, 31>::integrate(re, pn.lo, pn.hi, opt.max_depth, opt.rel_tol, &err_re, &l1_re);
  double vi = gauss_kronrod<double, 31>::integrate(im, pn.lo, pn.hi, opt.max_depth, opt.rel_tol, &err_im, &l1_im);
  r.value = {vr, vi};
  r.error = err_re + err_im;
  r.l1 = l1_re + l1_im;
  return r;
}

// Panels: |t| <= 1 split at 0, then each side in u with breakpoints at the
// scales of the shifts and of any extra features, lengths growing with u.
std::vector<Panel> make_panels(const Schedule& s, double U, const std::vector<double>& extra_u) {
  std::set<double> br{0.0, U};
  for (const Term& t : s.terms()) {
    for (double c : {t.gamma.ln(), 2.0 * t.gamma.ln()})
      for (double d : {-4.0, 0.0, 4.0})
        if (c + d > 0.0 && c + d < U) br.insert(c + d);
  }
  for (double c : extra_u)
    for (double d : {-3.0, 0.0, 3.0})
      if (c + d > 0.0 && c + d < U) br.insert(c + d);

  std::vector<double> pts;
  double prev = *br.begin();
  pts.push_back(prev);
  for (auto it = std::next(br.begin()); it != br.end(); ++it) {
    double next = *it;
    while (next - prev > std::max(1.0, 0.5 * prev)) {
      prev += std::max(1.0, 0.5 * prev);
      pts.push_back(prev);
    }
    pts.push_back(next);
    prev = next;
  }

  std::vector<Panel> out{{0, -1.0, 0.0}, {0, 0.0, 1.0}};
  for (int sigma : {1, -1})
    for (std::size_t i = 1; i < pts.size(); ++i) out.push_back({sigma, pts[i - 1], pts[i]});
  return out;
}

// Bound on (1/pi) int_{u>U} |v*(+-e^u)| du over both sides, using
// |conj(xi) t + gamma| >= |t| on one side and >= sqrt(1 - |cos phi|) |t| on the other.
double tail_bound(const Schedule& s, const AngleSpec& angle, double U) {
  const double c = 1.0 - std::fabs(std::cos(angle.phi()));
  double sum = 0.0;
  for (const Term& t : s.terms())
    sum += std::exp(t.a.ln() - t.eps * U) * (1.0 + std::pow(c, -t.eps / 2.0)) / t.eps;
  return sum / pi;
}

double choose_U(const Schedule& s, const AngleSpec& angle, double min_u, const QuadOptions& opt) {
  double U = std::max(min_u, std::log(opt.min_T));
  for (const Term& t : s.terms()) U = std::max(U, 2.0 * t.gamma.ln() + 8.0);
  const double c = 1.0 - std::fabs(std::cos(angle.phi()));
  const double share = opt.tail_target / s.size();
  for (const Term& t : s.terms()) {
    const double ln_c = t.a.ln() + std::log((1.0 + std::pow(c, -t.eps / 2.0)) / (pi * t.eps));
    U = std::max(U, (ln_c - std::log(share)) / t.eps);
  }
  return U;
}

QuadResult integrate_line(const std::vector<Panel>& panels, const PanelFn& fn, const QuadOptions& opt) {
  std::vector<PanelResult> res(panels.size());
  const std::size_t threads = static_cast<std::size_t>(std::max(1, opt.threads));
  if (threads == 1) {
    for (std::size_t i = 0; i < panels.size(); ++i) res[i] = integrate_panel(fn, panels[i], opt);
  } else {
    for (std::size_t base = 0; base < panels.size(); base += threads) {
      std::vector<std::future<PanelResult>> fut;
      for (std::size_t i = base; i < std::min(panels.size(), base + threads); ++i)
        fut.push_back(std::async(std::launch::async, integrate_panel, std::cref(fn), std::cref(panels[i]), std::cref(opt)));
      for (std::size_t i = 0; i < fut.size(); ++i) res[base + i] = fut[i].get();
    }
  }
  // Fixed summation order regardless of thread count.
  QuadResult q;
  for (const PanelResult& r : res) {
    q.value += r.value;
    q.error += r.error;
    q.l1 += r.l1;
  }
  q.panels = static_cast<int>(panels.size());
  q.error += 1e-15 * q.l1;
  return q;
}

// Kernel k(t) applied as int k(t) v*(t) dt / pi. `inner(t)` is k(t) for |t| <= 1;
// `outer(sigma, u)` is k(sigma e^u) e^u, which must stay O(1) for large u.
QuadResult integrate_kernel(const Schedule& s, const AngleSpec& angle, const std::function<cplx(double)>& inner,
                            const std::function<cplx(int, double)>& outer, double outer_sup,
                            const std::vector<double>& extra_u, const QuadOptions& opt) {
  check_angle(s, angle);
  const Schedule fin = s.truncated(s.size());
  const XComplex xi(angle.xi());
  const XComplex xibar = xi.conj();
  const double min_u = extra_u.empty() ? 0.0 : *std::max_element(extra_u.begin(), extra_u.end()) + 10.0;
  const double U = choose_U(fin, angle, min_u, opt);
  PanelFn fn = [&](int sigma, double x) -> cplx {
    if (sigma == 0) return inner(x) * vstar_inner(fin, xibar, xi, x) / pi;
    return outer(sigma, x) * vstar_outer(fin, xibar, xi, sigma, x) / pi;
  };
  QuadResult q = integrate_line(make_panels(fin, U, extra_u), fn, opt);
  q.U = U;
  q.tail_bound = outer_sup * tail_bound(fin, angle, U);
  q.error += q.tail_bound;
  return q;
}

}  // namespace

double boundary_value(const Schedule& s, const AngleSpec& angle, double t) {
  check_angle(s, angle);
  const XComplex xi(angle.xi());
  return vstar_inner(s.truncated(s.size()), xi.conj(), xi, t);
}

double boundary_density(const Schedule& s, const AngleSpec& angle, double t) {
  double d = boundary_value(s, angle, t) / (pi * (1.0 + t * t));
  if (d < -1e-12) throw NumericFailure("negative boundary density at t = " + std::to_string(t));
  return std::max(d, 0.0);
}

MomentBoundReport moment_bounds(const Schedule& s, const AngleSpec& angle) {
  check_angle(s, angle);
  const double phi = angle.phi();
  const double c = 1.0 - std::fabs(std::cos(phi));
  MomentBoundReport rep;
  for (const Term& t : s.terms()) {
    const double w = t.ln_weight();  // ln(a / gamma^eps)
    TermMomentBound b;
    b.k = t.k;
    b.central = std::exp(w + ln_log1p_gamma_sq(t.gamma.ln())) / std::sin(phi);
    const double plain = std::exp(w) / t.eps;
    // The side where conj(xi) t has negative real part carries 1/(1 - |cos phi|).
    if (phi <= pi / 2) {
      b.right = plain;
      b.left = plain / c;
    } else {
      b.right = plain / c;
      b.left = plain;
    }
    rep.total += b.central + b.right + b.left;
    rep.terms.push_back(b);
  }
  return rep;
}

MomentResult moment_abs(const Schedule& s, const AngleSpec& angle, const QuadOptions& opt) {
  MomentResult r;
  r.l1 = check_l1_condition(s);
  r.certified = r.l1->passed;
  r.bounds = moment_bounds(s, angle);
  r.quad = integrate_kernel(
      s, angle, [](double t) { return cplx(std::fabs(t) / (1.0 + t * t)); },
      [](int, double u) { return cplx(1.0 / (1.0 + std::exp(-2.0 * u))); }, 1.0, {}, opt);
  r.value = r.quad.value.real();
  r.error = r.quad.error;
  return r;
}

BetaResult beta_of(const Schedule& s, const AngleSpec& angle, const QuadOptions& opt) {
  if (!check_l1_condition(s).passed) throw DomainError("first moment not certified");
  QuadResult q = integrate_kernel(
      s, angle, [](double t) { return cplx(t / (1.0 + t * t)); },
      [](int sigma, double u) { return cplx(sigma / (1.0 + std::exp(-2.0 * u))); }, 1.0, {}, opt);
  return {q.value.real(), q.error};
}

ReconstructResult reconstruct_check(const Schedule& s, const AngleSpec& angle, std::span<const cplx> Z, double tol,
                                    const QuadOptions& opt) {
  check_angle(s, angle);
  const XComplex xi(angle.xi());
  ReconstructResult res;
  for (const cplx& z : Z) {
    if (!(z.imag() > 0.0)) throw DomainError("reconstruct_check: sample points need Im z > 0");
    ReconstructPoint pt;
    pt.z = z;
    pt.direct = (xi * eval_p(s.truncated(s.size()), xi.conj() * XComplex(z)).value).to_complex();
    const double lz = std::log(std::abs(z));
    const double sup = 1.0 / (1.0 - std::exp(-10.0));
    QuadResult q = integrate_kernel(
        s, angle, [z](double t) { return 1.0 / (t - z); },
        [z](int sigma, double u) { return 1.0 / (double(sigma) - z * std::exp(-u)); }, sup,
        {std::max(lz, 0.0)}, opt);
    pt.reconstructed = q.value;
    const double mag = std::abs(pt.direct);
    pt.rel_error = std::abs(pt.reconstructed - pt.direct) / mag;
    pt.rel_estimate = q.error / mag;
    res.max_rel_error = std::max(res.max_rel_error, pt.rel_error);
    res.max_rel_estimate = std::max(res.max_rel_estimate, pt.rel_estimate);
    res.points.push_back(pt);
  }
  res.passed = tol > 0.0 && res.max_rel_error <= tol;
  return res;
}

ReconstructResult reconstruct_check(const MapHandle& map, std::span<const cplx> Z, double tol, const QuadOptions& opt) {
  if (!map.has_schedule()) throw DomainError("unsupported variant");
  return reconstruct_check(map.schedule(), map.schedule().angle(), Z, tol, opt);
}

std::vector<PoissonPoint> poisson_check(const Schedule& s, const AngleSpec& angle, std::span<const cplx> Z,
                                        const QuadOptions& opt) {
  check_angle(s, angle);
  const XComplex xi(angle.xi());
  std::vector<PoissonPoint> out;
  for (const cplx& z : Z) {
    if (!(z.imag() > 0.0)) throw DomainError("poisson_check: sample points need Im z > 0");
    const double x = z.real(), y = z.imag();
    PoissonPoint pt;
    pt.z = z;
    pt.direct = (xi * eval_p(s.truncated(s.size()), xi.conj() * XComplex(z)).value).im.to_double();
    QuadResult q = integrate_kernel(
        s, angle, [x, y](double t) { return cplx(y / ((t - x) * (t - x) + y * y)); },
        [x, y](int sigma, double u) {
          const double e = std::exp(-u);
          const double d = double(sigma) - x * e;
          return cplx(y * e / (d * d + y * e * y * e));
        },
        1.0, {std::max(std::log(std::abs(z)), 0.0)}, opt);
    pt.integral = q.value.real();
    pt.error_estimate = q.error;
    out.push_back(pt);
  }
  return out;
}

TermMomentBound majorant_integrals(const Schedule& s, const AngleSpec& angle, int k, double u_max,
                                   const QuadOptions& opt) {
  check_angle(s, angle);
  const Term& term = s.term(k);
  const XComplex xibar = XComplex(angle.xi()).conj();
  const XComplex g(term.gamma.value());
  const double lg = term.gamma.ln();
  // a |t| / ((1 + t^2) |conj(xi) t + gamma|^eps) in u, times e^u.
  auto outer = [&](int sigma, double u) -> cplx {
    XReal t = XReal::exp(u);
    if (sigma < 0) t = -t;
    const double ln_mod = (xibar * XComplex(t) + g).log_abs();
    return std::exp(term.a.ln() - term.eps * ln_mod) / (1.0 + std::exp(-2.0 * u));
  };
  auto inner = [&](int, double t) -> cplx {
    const double ln_mod = (xibar * XComplex(XReal(t)) + g).log_abs();
    return std::exp(term.a.ln() - term.eps * ln_mod) * std::fabs(t) / (1.0 + t * t);
  };
  auto run = [&](const PanelFn& fn, std::vector<Panel> panels) { return integrate_line(panels, fn, opt).value.real(); };

  std::vector<double> pts{0.0};
  for (double u = 1.0; u < lg; u = std::min(lg, u + std::max(1.0, 0.5 * u))) pts.push_back(u);
  if (lg > 0.0) pts.push_back(lg);
  std::vector<Panel> central{{0, -1.0, 0.0}, {0, 0.0, 1.0}};
  for (int sigma : {1, -1})
    for (std::size_t i = 1; i < pts.size(); ++i) central.push_back({sigma, pts[i - 1], pts[i]});

  std::vector<double> far{std::max(lg, 0.0)};
  for (double u = far.back(); u < u_max;) {
    u = std::min(u_max, u + std::max(1.0, 0.5 * u));
    far.push_back(u);
  }
  std::vector<Panel> right, left;
  for (std::size_t i = 1; i < far.size(); ++i) {
    right.push_back({1, far[i - 1], far[i]});
    left.push_back({-1, far[i - 1], far[i]});
  }

  PanelFn fn = [&](int sigma, double x) { return sigma == 0 ? inner(0, x) : outer(sigma, x); };
  TermMomentBound b;
  b.k = k;
  b.central = run(fn, central);
  b.right = run(fn, right);
  b.left = run(fn, left);
  return b;
}

void write_density_csv(std::ostream& os, const Schedule& s, const AngleSpec& angle, std::span<const double> ts) {
  os << "t,density\n";
  char buf[64];
  for (double t : ts) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, boundary_density(s, angle, t));
    os << buf;
  }
}

ParityMoments mirrored_moments(const std::function<double(double)>& density_pos, double t_max, const QuadOptions& opt) {
  std::vector<Panel> panels{{1, 0.0, t_max}, {-1, 0.0, t_max}};
  // sigma carries the side; the density is even by construction.
  PanelFn abs_fn = [&](int, double t) { return cplx(t * density_pos(t)); };
  PanelFn signed_fn = [&](int sigma, double t) { return cplx(sigma * t * density_pos(t)); };
  ParityMoments m;
  m.abs_moment = integrate_line(panels, abs_fn, opt).value.real();
  m.signed_moment = integrate_line(panels, signed_fn, opt).value.real();
  return m;
}

}  // namespace slopelab
