#include "slopelab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "slopelab/error.hpp"

namespace slopelab {

using std::numbers::pi;

double Checkpoint::log10_abs() const {
  if (z.is_zero()) return -HUGE_VAL;
  return z.log_abs() / std::numbers::ln10;
}

std::complex<double> ratio_Rk(const Schedule& s, int k, const XComplex& z) {
  if (k < 1 || k > s.size()) throw DomainError("ratio_Rk: index out of range");
  XComplex pk = eval_term(s, k, z);
  XComplex rest;
  for (const Term& t : s.terms())
    if (t.k != k) rest += eval_term(s, t.k, z);
  return (rest / pk).to_complex();
}

double exit_band(const Schedule& s, int k) {
  const Term& t = s.term(k);
  return s.theta() - 2.0 * pi * t.eps - 2.0 / k;
}

namespace {

void track_arg(OrbitTrace& tr, double arg, bool tail) {
  tr.min_arg = std::min(tr.min_arg, arg);
  tr.max_arg = std::max(tr.max_arg, arg);
  if (tail) {
    tr.tail_min_arg = std::min(tr.tail_min_arg, arg);
    tr.tail_max_arg = std::max(tr.tail_max_arg, arg);
    ++tr.tail_points;
  }
}

class CheckpointClock {
 public:
  explicit CheckpointClock(const OrbitConfig& cfg)
      : stride_(cfg.checkpoint_stride < 1 ? BigInt(1) : cfg.checkpoint_stride), geometric_(cfg.geometric_checkpoints) {}

  bool due(const BigInt& count) const { return count >= next_; }
  void fired(const BigInt& count) {
    next_ = count + stride_;
    if (geometric_) stride_ *= 2;
  }

 private:
  BigInt next_ = 0;
  BigInt stride_;
  bool geometric_;
};

void emit(OrbitTrace& tr, const OrbitConfig& cfg, Checkpoint cp) {
  if (cfg.sink) cfg.sink(cp);
  if (cfg.store_checkpoints) tr.checkpoints.push_back(std::move(cp));
}

std::string at_count(const BigInt& n) { return " at application " + to_string(n); }

// Orbits of schedule maps, iterated in the coordinates where the cone is
// symmetric about the positive axis; stored in the map's own frame.
OrbitTrace run_schedule(const MapHandle& map, const OrbitConfig& cfg, bool accelerated) {
  const Schedule& s = map.schedule();
  if (!(cfg.eta > 0.0 && cfg.eta <= 0.1)) throw DomainError("eta must lie in (0, 0.1]");
  if (!(cfg.tol_arg > 0.0)) throw DomainError("tol_arg must be positive");

  const XComplex frame(map.frame());
  const XComplex xi(s.angle().xi());
  const int K = s.size();
  const XReal gamma1 = s.term(1).gamma.value();
  const XReal half_gamma1 = gamma1 / XReal(2.0);
  std::vector<XReal> lo(static_cast<std::size_t>(K)), hi(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    lo[k - 1] = s.term(k).gamma.value();
    hi[k - 1] = XReal::exp(2.0 * s.term(k).gamma.ln());
  }
  const Cone cone(s.theta());

  OrbitTrace tr;
  tr.map_name = map.name();
  tr.variant = map.variant();
  tr.f_shift = map.variant() == MapVariant::f_on_UHP ? 0.0 : s.angle().phi();

  XComplex w = cfg.z0 ? frame.conj() * *cfg.z0 : XComplex(half_gamma1);
  const bool check_cone = cone.contains(w);
  const bool region_tail = K >= cfg.tail_region;

  BigInt count = 0;
  CheckpointClock clock(cfg);
  bool event_pending = true;  // the starting point is always recorded
  bool tail_open = false;
  int cur = 0;       // region the orbit is in, 0 between regions
  int next_k = 1;    // next region to enter
  BigInt last_m = 0;

  auto update_regions = [&](const XReal& x) {
    for (;;) {
      if (cur > 0 && x > hi[cur - 1]) {
        RegionEvent& ev = tr.events.back();
        ev.exit_count = count;
        ev.exit_z = frame * w;
        ev.exit_arg = w.arg();
        ev.exit_uncertainty = last_m > 1 ? last_m : BigInt(0);
        next_k = cur + 1;
        cur = 0;
        event_pending = true;
        continue;
      }
      if (cur == 0 && next_k <= K && x >= lo[next_k - 1]) {
        RegionEvent ev;
        ev.k = next_k;
        ev.entry_count = count;
        ev.entry_z = frame * w;
        ev.entry_arg = w.arg();
        ev.entry_overshoot = x - lo[next_k - 1];
        ev.entry_uncertainty = last_m > 1 ? last_m : BigInt(0);
        ev.band = exit_band(s, next_k);
        tr.events.push_back(ev);
        cur = next_k;
        if (region_tail && cur >= cfg.tail_region) tail_open = true;
        event_pending = true;
        continue;
      }
      break;
    }
  };
  // A start beyond some regions skips them; a start inside one opens it at count 0.
  while (next_k <= K && w.re > hi[next_k - 1]) ++next_k;
  update_regions(w.re);

  for (;;) {
    const SeriesSample S = sample_series(s, w);
    const XComplex& p = S.sum;
    const bool finished = cur == 0 && next_k > K;
    const bool out_of_budget = cfg.max_applications && count >= *cfg.max_applications;

    // Checks at the current point.
    if (p.re.sign() <= 0) throw NumericFailure("step with non-positive real part" + at_count(count));
    const double step_ratio = (p.re / half_gamma1).to_double();
    tr.max_step_ratio = std::max(tr.max_step_ratio, step_ratio);
    if (step_ratio > 1.0 + 1e-12) throw NumericFailure("step exceeds gamma_1/2" + at_count(count));
    tr.min_step_cos = std::min(tr.min_step_cos, (p.re / p.abs()).to_double());
    if (check_cone && !cone.contains(w)) throw NumericFailure("iterate left the cone" + at_count(count));

    std::optional<double> abs_R;
    if (cur > 0) {
      RegionEvent& ev = tr.events.back();
      const XComplex& pk = S.terms[static_cast<std::size_t>(cur - 1)];
      abs_R = ((p - pk) / pk).abs().to_double();
      ev.max_ratio = std::max(ev.max_ratio, *abs_R);
      const double slack = cur % 2 == 0 ? p.arg() - ev.band : -ev.band - p.arg();
      ev.min_quotient_slack = std::min(ev.min_quotient_slack, slack);
      if (slack < -1e-9) ++ev.quotient_violations;
    }

    if (!tail_open && !region_tail && count >= cfg.tail_from) tail_open = true;
    track_arg(tr, (frame * w).arg(), tail_open);

    if (event_pending || clock.due(count) || finished || out_of_budget) {
      Checkpoint cp;
      cp.count = count;
      cp.z = frame * w;
      cp.region_k = cur;
      cp.abs_Rk = abs_R;
      try {
        cp.hyp_step = hyp_step(xi * w, xi * p);
      } catch (const DomainError&) {
      }
      emit(tr, cfg, std::move(cp));
      clock.fired(count);
      event_pending = false;
    }

    if (finished) {
      tr.complete = true;
      break;
    }
    if (out_of_budget) {
      tr.incomplete = true;
      break;
    }

    // Superstep size.
    XReal m(1.0);
    if (accelerated) {
      XReal cap = S.deriv_bound.is_zero() ? XReal::exp(1e6) : (XReal(cfg.eta) / S.deriv_bound).floor();
      if (cap < XReal(1.0)) cap = XReal(1.0);
      m = cap;
      const bool exiting = cur > 0;
      const XReal boundary = exiting ? hi[cur - 1] : lo[next_k - 1];
      const XReal q = (boundary - w.re) / p.re;
      XReal land = exiting ? q.floor() + XReal(1.0) : -((-q).floor());
      if (land < XReal(1.0)) land = XReal(1.0);
      // Sitting on the boundary at double resolution: the landing must still move x.
      if (w.re + land * p.re == w.re) land = max(land, (w.re.abs().ldexp(-51) / p.re).floor() + XReal(1.0));
      if (land <= cap) m = land;
    }
    BigInt mb = to_bigint(m);
    if (cfg.max_applications) {
      const BigInt remaining = *cfg.max_applications - count;
      if (mb > remaining) {
        mb = remaining;
        m = to_xreal(mb);
      }
    }

    const XReal x_before = w.re;
    if (mb == 1) {
      w += p;
    } else {
      const XReal pairs = m * (m - XReal(1.0)) / XReal(2.0);
      w += p * m + (S.derivative * p) * pairs;
    }
    if (!(w.re > x_before)) throw NumericFailure("real part did not increase" + at_count(count));
    count += mb;
    tr.superstep_total += mb;
    ++tr.supersteps;
    last_m = mb;
    update_regions(w.re);
  }

  tr.applications = count;
  tr.last_z = frame * w;
  return tr;
}

OrbitTrace run_plain(const MapHandle& map, const OrbitConfig& cfg) {
  if (!cfg.z0) throw DomainError("a starting point is required for this map");
  if (!cfg.max_applications) throw DomainError("an application budget is required for this map");
  const BigInt budget = *cfg.max_applications;

  OrbitTrace tr;
  tr.map_name = map.name();
  tr.variant = map.variant();
  XComplex z = *cfg.z0;
  bool tail_open = false;
  const bool uhp = map.upper_half_plane();

  // Counting in a machine integer keeps the hot loop cheap; BigInt only at checkpoints.
  const bool small = budget <= BigInt(std::numeric_limits<long long>::max() / 2);
  long long n = 0;
  const long long n_budget = small ? budget.convert_to<long long>() : std::numeric_limits<long long>::max();
  long long next_ck = 0;
  long long stride = cfg.checkpoint_stride < 1 ? 1
                     : cfg.checkpoint_stride > BigInt(1LL << 61) ? (1LL << 61)
                                                                 : cfg.checkpoint_stride.convert_to<long long>();
  BigInt tail_from = cfg.tail_from;
  const long long tail_n = tail_from > BigInt(n_budget) ? n_budget + 1 : tail_from.convert_to<long long>();

  for (;;) {
    if (!tail_open && n >= tail_n) tail_open = true;
    track_arg(tr, z.arg(), tail_open);
    const bool last = n >= n_budget;
    const XComplex next = map.apply(z);
    if (uhp && next.im.sign() <= 0) throw NumericFailure("iterate left the upper half-plane" + at_count(BigInt(n)));

    if (n >= next_ck || last) {
      Checkpoint cp;
      cp.count = n;
      cp.z = z;
      if (uhp) {
        try {
          cp.hyp_step = hyp_step(z, next - z);
        } catch (const DomainError&) {
        }
      }
      emit(tr, cfg, std::move(cp));
      next_ck = n + stride;
      if (cfg.geometric_checkpoints && stride < (1LL << 61)) stride *= 2;
    }
    if (last) break;
    z = next;
    ++n;
  }
  tr.applications = BigInt(n);
  tr.superstep_total = tr.applications;
  tr.supersteps = n;
  tr.complete = true;
  tr.last_z = z;
  return tr;
}

}  // namespace

OrbitTrace iterate_exact(const MapHandle& map, const OrbitConfig& cfg) {
  if (map.has_schedule()) return run_schedule(map, cfg, false);
  return run_plain(map, cfg);
}

OrbitTrace iterate_accelerated(const MapHandle& map, const OrbitConfig& cfg) {
  if (!map.has_schedule()) throw DomainError("accelerated iteration needs a schedule map");
  return run_schedule(map, cfg, true);
}

OrbitTrace iterate(const MapHandle& map, const OrbitConfig& cfg) {
  return cfg.mode == EngineMode::exact ? iterate_exact(map, cfg) : iterate_accelerated(map, cfg);
}

namespace {

SlopeReport base_report(const OrbitTrace& tr) {
  if (tr.tail_points < 2) throw DomainError("insufficient transit");
  SlopeReport r;
  r.a_hat = tr.tail_min_arg + tr.f_shift;
  r.b_hat = tr.tail_max_arg + tr.f_shift;
  r.min_arg = tr.min_arg + tr.f_shift;
  r.max_arg = tr.max_arg + tr.f_shift;
  for (const Checkpoint& cp : tr.checkpoints)
    if (cp.hyp_step) r.hyp_steps.push_back(*cp.hyp_step);
  return r;
}

}  // namespace

SlopeReport slope_report(const OrbitTrace& tr, const AngleSpec& angle, double tol_arg) {
  if (tr.events.size() < 2) throw DomainError("insufficient transit");
  SlopeReport r = base_report(tr);
  for (const RegionEvent& ev : tr.events) {
    if (!ev.exit_arg) continue;
    ExitCheck c;
    c.k = ev.k;
    c.arg = *ev.exit_arg;
    c.band = ev.band;
    c.passed = ev.k % 2 == 0 ? c.arg >= c.band - tol_arg : c.arg <= -c.band + tol_arg;
    r.exits_in_band = r.exits_in_band && c.passed;
    r.exits.push_back(c);
  }
  r.within_angle = r.min_arg >= angle.a() - tol_arg && r.max_arg <= angle.b() + tol_arg;
  return r;
}

SlopeReport slope_report(const OrbitTrace& tr, double tol_arg) {
  SlopeReport r = base_report(tr);
  r.within_angle = r.min_arg >= -tol_arg && r.max_arg <= pi + tol_arg;
  return r;
}

std::vector<XReal> hyp_step_series(const MapHandle& map, const OrbitTrace& trace) {
  std::vector<XReal> out;
  out.reserve(trace.checkpoints.size());
  if (map.has_schedule()) {
    const Schedule& s = map.schedule();
    const XComplex frame(map.frame());
    const XComplex xi(s.angle().xi());
    for (const Checkpoint& cp : trace.checkpoints) {
      const XComplex w = frame.conj() * cp.z;
      out.push_back(hyp_step(xi * w, xi * eval_p(s, w).value));
    }
    return out;
  }
  if (!map.upper_half_plane()) throw DomainError("hyp_step_series: map has no half-plane frame");
  for (const Checkpoint& cp : trace.checkpoints) out.push_back(hyp_step(cp.z, map.apply(cp.z) - cp.z));
  return out;
}

bool non_increasing(const std::vector<XReal>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + XReal(slack)) return false;
  return true;
}

}  // namespace slopelab
