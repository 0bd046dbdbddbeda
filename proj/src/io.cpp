#include "slopelab/io.hpp"

#include <cmath>
#include <cstdio>

#include "slopelab/error.hpp"

namespace slopelab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const XReal& x) { return Json{{"mantissa", x.mantissa()}, {"exp2", x.exp2()}}; }

XReal xreal_from_json(const Json& j) {
  try {
    return XReal::from_parts(j.at("mantissa").get<double>(), j.at("exp2").get<std::int64_t>());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad extended real: ") + e.what());
  }
}

Json schedule_to_json(const Schedule& s) {
  Json terms = Json::array();
  for (const Term& t : s.terms())
    terms.push_back({{"k", t.k}, {"a_ln", t.a.ln()}, {"gamma_ln", t.gamma.ln()}, {"eps", t.eps}, {"theta_k", t.theta}});
  Json cert = nullptr;
  if (const auto& c = s.tail_certificate()) cert = {{"l0", c->l0}, {"ratio_bound", c->ratio_bound}};
  return Json{{"angle", {{"a", s.angle().a()}, {"b", s.angle().b()}}}, {"terms", terms}, {"tail_certificate", cert}};
}

Schedule schedule_from_json(const Json& j) {
  try {
    AngleSpec angle(j.at("angle").at("a").get<double>(), j.at("angle").at("b").get<double>());
    std::vector<Term> terms;
    for (const Json& t : j.at("terms")) {
      terms.push_back(Term{t.at("k").get<int>(), PosLog::from_ln(t.at("a_ln").get<double>()),
                           PosLog::from_ln(t.at("gamma_ln").get<double>()), t.at("eps").get<double>(),
                           t.at("theta_k").get<double>()});
    }
    std::optional<TailCertificate> cert;
    if (j.contains("tail_certificate") && !j["tail_certificate"].is_null()) {
      const Json& c = j["tail_certificate"];
      cert = TailCertificate{c.at("l0").get<int>(), c.at("ratio_bound").get<double>()};
    }
    return Schedule(angle, std::move(terms), cert);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad schedule document: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bad schedule document: ") + e.what());
  }
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const ValidationReport& r) {
  Json conds = Json::array();
  for (const ConditionResult& c : r.conditions) {
    conds.push_back({{"id", c.id},
                     {"passed", c.passed},
                     {"slack_ln", finite_or_null(c.slack_ln)},
                     {"worst_k", c.worst_k},
                     {"finite_horizon_only", c.finite_horizon_only},
                     {"detail", c.detail}});
  }
  return Json{{"passed", r.passed}, {"finite_horizon_only", r.finite_horizon_only}, {"conditions", conds}};
}

Json to_json(const L1Report& r) {
  return Json{{"passed", r.passed},
              {"finite_horizon_only", r.finite_horizon_only},
              {"log_sum_ln", r.log_sum.ln()},
              {"eps_sum_ln", r.eps_sum.ln()},
              {"detail", r.detail}};
}

Json to_json(const RegionEvent& e) {
  Json j{{"k", e.k},
         {"entry_count", to_string(e.entry_count)},
         {"entry_uncertainty", to_string(e.entry_uncertainty)},
         {"entry_arg", e.entry_arg},
         {"entry_overshoot", to_json(e.entry_overshoot)},
         {"exit_count", nullptr},
         {"exit_uncertainty", to_string(e.exit_uncertainty)},
         {"exit_arg", nullptr},
         {"band", e.band},
         {"max_abs_Rk", e.max_ratio},
         {"min_quotient_slack", finite_or_null(e.min_quotient_slack < 1e299 ? e.min_quotient_slack : NAN)},
         {"quotient_violations", e.quotient_violations}};
  if (e.exit_count) j["exit_count"] = to_string(*e.exit_count);
  if (e.exit_arg) j["exit_arg"] = *e.exit_arg;
  return j;
}

Json to_json(const SlopeReport& r) {
  Json exits = Json::array();
  for (const ExitCheck& c : r.exits) exits.push_back({{"k", c.k}, {"arg", c.arg}, {"band", c.band}, {"passed", c.passed}});
  auto lg = [](const XReal& h) { return h.is_zero() ? Json(nullptr) : Json(h.log10()); };
  Json hyp{{"count", r.hyp_steps.size()}, {"non_increasing", non_increasing(r.hyp_steps, 1e-10)}};
  hyp["first_log10"] = r.hyp_steps.empty() ? Json(nullptr) : lg(r.hyp_steps.front());
  hyp["last_log10"] = r.hyp_steps.empty() ? Json(nullptr) : lg(r.hyp_steps.back());
  return Json{{"a_hat", r.a_hat},     {"b_hat", r.b_hat},       {"min_arg", r.min_arg},
              {"max_arg", r.max_arg}, {"within_angle", r.within_angle}, {"exits_in_band", r.exits_in_band},
              {"exits", exits},       {"hyp_step", hyp}};
}

Json to_json(const MomentResult& r) {
  Json terms = Json::array();
  for (const TermMomentBound& b : r.bounds.terms)
    terms.push_back({{"k", b.k}, {"central", b.central}, {"right", b.right}, {"left", b.left}});
  Json j{{"value", r.value},
         {"error", r.error},
         {"certified", r.certified},
         {"U", r.quad.U},
         {"tail_bound", r.quad.tail_bound},
         {"bound_total", r.bounds.total},
         {"bounds", terms}};
  if (r.l1) j["l1"] = to_json(*r.l1);
  return j;
}

Json to_json(const ReconstructResult& r) {
  Json pts = Json::array();
  for (const ReconstructPoint& p : r.points) {
    pts.push_back({{"z", {p.z.real(), p.z.imag()}},
                   {"direct", {p.direct.real(), p.direct.imag()}},
                   {"reconstructed", {p.reconstructed.real(), p.reconstructed.imag()}},
                   {"rel_error", p.rel_error},
                   {"rel_estimate", p.rel_estimate}});
  }
  return Json{{"passed", r.passed}, {"max_rel_error", r.max_rel_error}, {"max_rel_estimate", r.max_rel_estimate}, {"points", pts}};
}

TraceFormat parse_trace_format(const std::string& name) {
  if (name == "csv") return TraceFormat::csv;
  if (name == "jsonl") return TraceFormat::jsonl;
  throw ConfigError("unknown trace format '" + name + "'");
}

TraceWriter::TraceWriter(std::ostream& os, TraceFormat fmt, long long decimation)
    : os_(os), fmt_(fmt), decimation_(decimation < 1 ? 1 : decimation) {
  if (fmt_ == TraceFormat::csv)
    os_ << "application_count,re_mantissa,re_exp2,im_mantissa,im_exp2,arg,log10_abs,region_k,abs_Rk,hyp_step\n";
}

void TraceWriter::write(const Checkpoint& cp) {
  if (seen_++ % decimation_ != 0) return;
  const double hyp = cp.hyp_step ? cp.hyp_step->to_double() : NAN;
  if (fmt_ == TraceFormat::csv) {
    os_ << to_string(cp.count) << ',' << format_double(cp.z.re.mantissa()) << ',' << cp.z.re.exp2() << ','
        << format_double(cp.z.im.mantissa()) << ',' << cp.z.im.exp2() << ',' << format_double(cp.arg()) << ','
        << format_double(cp.log10_abs()) << ',';
    if (cp.region_k > 0) os_ << cp.region_k;
    os_ << ',';
    if (cp.abs_Rk) os_ << format_double(*cp.abs_Rk);
    os_ << ',';
    if (cp.hyp_step) os_ << format_double(hyp);
    os_ << '\n';
    return;
  }
  Json j{{"application_count", to_string(cp.count)},
         {"re", to_json(cp.z.re)},
         {"im", to_json(cp.z.im)},
         {"arg", cp.arg()},
         {"log10_abs", cp.log10_abs()},
         {"region_k", cp.region_k > 0 ? Json(cp.region_k) : Json(nullptr)},
         {"abs_Rk", cp.abs_Rk ? Json(*cp.abs_Rk) : Json(nullptr)},
         {"hyp_step", cp.hyp_step ? Json(hyp) : Json(nullptr)}};
  os_ << j.dump() << '\n';
}

}  // namespace slopelab
