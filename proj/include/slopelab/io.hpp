#pragma once

// JSON and CSV forms of schedules, reports and orbit traces.

#include <ostream>
#include <string>

#include <json.hpp>

#include "slopelab/herglotz.hpp"
#include "slopelab/orbit.hpp"
#include "slopelab/schedule.hpp"

namespace slopelab {

using Json = nlohmann::ordered_json;

Json to_json(const XReal& x);
XReal xreal_from_json(const Json& j);

/// {angle: {a, b}, terms: [{k, a_ln, gamma_ln, eps, theta_k}], tail_certificate: {l0, ratio_bound} | null}
Json schedule_to_json(const Schedule& s);
/// Throws ConfigError for malformed documents.
Schedule schedule_from_json(const Json& j);

Json to_json(const ValidationReport& r);
Json to_json(const L1Report& r);
Json to_json(const RegionEvent& e);
Json to_json(const SlopeReport& r);
Json to_json(const MomentResult& r);
Json to_json(const ReconstructResult& r);

enum class TraceFormat { csv, jsonl };
TraceFormat parse_trace_format(const std::string& name);

/// Streams checkpoints, keeping every `decimation`-th one.
class TraceWriter {
 public:
  TraceWriter(std::ostream& os, TraceFormat fmt, long long decimation = 1);
  void write(const Checkpoint& cp);

 private:
  std::ostream& os_;
  TraceFormat fmt_;
  long long decimation_;
  long long seen_ = 0;
};

/// %.17g.
std::string format_double(double v);

}  // namespace slopelab
