#include "slopelab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "slopelab/error.hpp"

namespace slopelab::cli {

using std::numbers::pi;

double parse_angle(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ConfigError("angle must be a number or a string");
  std::string s = v.get<std::string>();
  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    s.resize(s.size() - 2);
    scale = pi;
    if (s.empty()) return pi;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot read angle '" + v.get<std::string>() + "'");
  }
  if (used != s.size()) throw ConfigError("cannot read angle '" + v.get<std::string>() + "'");
  return x * scale;
}

void apply_override(Json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override needs key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &cfg;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty path component in '" + key + "'");
    Json* child = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0, used = 0;
      try {
        idx = std::stoul(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != part.size() || idx >= node->size()) throw ConfigError("bad array index '" + part + "' in '" + key + "'");
      child = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = Json::object();
      child = &(*node)[part];
    }
    if (dot == std::string::npos) {
      *child = value;
      return;
    }
    node = child;
    start = dot + 1;
  }
}

namespace {

double num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j[key];
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return std::stod(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(std::string("'") + key + "' must be a number");
}

int integer(const Json& j, const char* key, int fallback) {
  const double v = num(j, key, fallback);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError(std::string("'") + key + "' must be an integer");
  return static_cast<int>(v);
}

BigInt count(const Json& j, const char* key, const BigInt& fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j[key];
  if (v.is_string()) return parse_count(v.get<std::string>());
  if (v.is_number_integer()) return BigInt(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return parse_count(os.str());
  }
  throw ConfigError(std::string("'") + key + "' must be a count");
}

std::string str(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

const Json& section(const Json& cfg, const char* key) {
  static const Json empty = Json::object();
  if (!cfg.contains(key)) return empty;
  if (!cfg[key].is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return cfg[key];
}

AngleSpec build_angle(const Json& cfg) {
  if (!cfg.contains("angle")) throw ConfigError("missing 'angle'");
  const Json& a = cfg["angle"];
  if (!a.is_object() || !a.contains("a") || !a.contains("b")) throw ConfigError("'angle' needs fields a and b");
  try {
    return AngleSpec(parse_angle(a["a"]), parse_angle(a["b"]));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

}  // namespace

Schedule build_schedule(const Json& cfg) {
  const Json& sc = section(cfg, "schedule");
  const std::string source = str(sc, "source", "");
  try {
    if (source == "file") {
      Schedule s = schedule_from_json(read_json_file(str(sc, "path", "")));
      return s;
    }
    const AngleSpec angle = build_angle(cfg);
    if (source == "synthesize") {
      return synthesize(angle, integer(sc, "K", 4), num(sc, "safety", 2.0), num(sc, "eps_ratio", 2.0));
    }
    if (source == "example21") {
      const int K = integer(sc, "K", 4);
      if (sc.contains("C1") != sc.contains("C2")) throw ConfigError("give both C1 and C2 or neither");
      if (sc.contains("C1")) return example21(angle, num(sc, "C1", 0), num(sc, "C2", 0), K);
      const auto c = find_example21_constants(angle, K);
      if (!c) throw ConfigError("no example constants found on the search grid");
      return example21(angle, c->c1, c->c2, K);
    }
    if (source == "inline") {
      Json doc = sc;
      doc["angle"] = {{"a", angle.a()}, {"b", angle.b()}};
      return schedule_from_json(doc);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("schedule.source must be one of synthesize, example21, file, inline");
}

namespace {

struct Context {
  Json cfg = Json::object();
  int threads = 1;
  bool wolff = false;
  std::string out_path;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

MapHandle build_map(const Json& cfg, const Schedule& s) {
  const std::string v = str(cfg, "map", "F");
  if (v == "F") return MapHandle::F(s);
  if (v == "g") return MapHandle::g(s);
  if (v == "f") return MapHandle::f(s);
  throw ConfigError("map must be one of F, g, f");
}

std::optional<XComplex> read_point(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const Json& p = j[key];
  if (!p.is_object()) throw ConfigError(std::string("'") + key + "' must be {re, im}");
  return XComplex(std::complex<double>(num(p, "re", 0.0), num(p, "im", 0.0)));
}

OrbitConfig build_engine(const Json& cfg) {
  const Json& e = section(cfg, "engine");
  OrbitConfig oc;
  const std::string mode = str(e, "mode", "accelerated");
  if (mode == "exact") {
    oc.mode = EngineMode::exact;
  } else if (mode != "accelerated") {
    throw ConfigError("engine.mode must be exact or accelerated");
  }
  oc.eta = num(e, "eta", oc.eta);
  oc.tol_arg = num(e, "tol_arg", oc.tol_arg);
  if (!(oc.eta > 0.0 && oc.eta <= 0.1)) throw ConfigError("engine.eta must lie in (0, 0.1]");
  if (!(oc.tol_arg > 0.0)) throw ConfigError("engine.tol_arg must be positive");
  if (e.contains("max_applications")) oc.max_applications = count(e, "max_applications", 0);
  oc.checkpoint_stride = count(e, "checkpoint_stride", 1);
  oc.geometric_checkpoints = !e.contains("geometric") || e["geometric"].get<bool>();
  oc.z0 = read_point(e, "z0");
  return oc;
}

QuadOptions build_quad(const Context& ctx) {
  const Json& h = section(ctx.cfg, "herglotz");
  QuadOptions q;
  q.rel_tol = num(h, "rel_tol", q.rel_tol);
  q.tail_target = num(h, "tail_target", q.tail_target);
  q.threads = ctx.threads;
  return q;
}

std::ostream& open_output(Context& ctx, std::unique_ptr<std::ofstream>& file, const std::string& path) {
  if (path.empty() || path == "-") return *ctx.out;
  file = std::make_unique<std::ofstream>(path);
  if (!*file) throw ConfigError("cannot write '" + path + "'");
  return *file;
}

std::string output_path(const Context& ctx) {
  if (!ctx.out_path.empty()) return ctx.out_path;
  return str(section(ctx.cfg, "output"), "path", "");
}

void print(Context& ctx, const Json& j) { *ctx.out << j.dump(2) << '\n'; }

// Each command has a build phase (config errors, exit 3) and a run phase.
using Runner = std::function<int()>;

Runner cmd_validate(Context& ctx) {
  auto s = std::make_shared<Schedule>(build_schedule(ctx.cfg));
  return [&ctx, s] {
    const ValidationReport rep = validate(*s);
    const L1Report l1 = check_l1_condition(*s);
    print(ctx, Json{{"validation", to_json(rep)}, {"l1", to_json(l1)}});
    return rep.passed ? ok : validation_failure;
  };
}

Runner cmd_synthesize(Context& ctx) {
  auto s = std::make_shared<Schedule>(build_schedule(ctx.cfg));
  const std::string path = output_path(ctx);
  return [&ctx, s, path] {
    std::unique_ptr<std::ofstream> file;
    std::ostream& os = open_output(ctx, file, path);
    os << schedule_to_json(*s).dump(2) << '\n';
    return validate(*s).passed ? ok : validation_failure;
  };
}

Json trace_summary(const OrbitTrace& tr) {
  Json events = Json::array();
  for (const RegionEvent& e : tr.events) events.push_back(to_json(e));
  return Json{{"map", tr.map_name},
              {"complete", tr.complete},
              {"incomplete", tr.incomplete},
              {"applications", to_string(tr.applications)},
              {"supersteps", tr.supersteps},
              {"checkpoints", tr.checkpoints.size()},
              {"max_step_ratio", tr.max_step_ratio},
              {"events", events}};
}

Runner wolff_runner(Context& ctx, bool write_trace, bool slopes_only) {
  const Json& w = section(ctx.cfg, "wolff");
  OrbitConfig oc;
  oc.mode = EngineMode::exact;
  oc.z0 = read_point(w, "z0").value_or(XComplex(std::complex<double>(0.0, 10.0)));
  if (!(oc.z0->im.sign() > 0)) throw ConfigError("wolff.z0 must lie in the upper half-plane");
  const BigInt steps = count(w, "steps", BigInt(10000000));
  if (steps > BigInt(1) << 62) throw ConfigError("wolff.steps is too large for exact iteration");
  oc.max_applications = steps;
  const double frac = num(w, "tail_fraction", 0.1);
  if (!(frac >= 0.0 && frac <= 1.0)) throw ConfigError("wolff.tail_fraction must lie in [0, 1]");
  oc.tail_from = BigInt(static_cast<long long>(std::floor((1.0 - frac) * steps.convert_to<double>())));
  const std::string path = write_trace ? output_path(ctx) : "";
  const TraceFormat fmt = parse_trace_format(str(section(ctx.cfg, "output"), "format", "csv"));
  const long long dec = static_cast<long long>(num(section(ctx.cfg, "output"), "decimation", 1));
  return [&ctx, oc, path, fmt, dec, slopes_only]() mutable {
    std::unique_ptr<std::ofstream> file;
    std::unique_ptr<TraceWriter> writer;
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw ConfigError("cannot write '" + path + "'");
      writer = std::make_unique<TraceWriter>(*file, fmt, dec);
      oc.sink = [&writer](const Checkpoint& cp) { writer->write(cp); };
    }
    const MapHandle map = MapHandle::wolff();
    const OrbitTrace tr = iterate_exact(map, oc);
    const SlopeReport rep = slope_report(tr);
    Json probe = Json::array();
    const std::vector<double> ys{1e2, 1e4, 1e6};
    std::vector<XComplex> pts;
    for (double y : ys) pts.emplace_back(std::complex<double>(0.0, y));
    const std::vector<double> vals = parabolicity_probe(map, pts);
    for (std::size_t i = 0; i < ys.size(); ++i) probe.push_back({{"y", ys[i]}, {"abs_ratio_minus_1", vals[i]}});
    Json j = slopes_only ? Json::object() : trace_summary(tr);
    j["slope_report"] = to_json(rep);
    j["tail_arg_spread"] = rep.b_hat - rep.a_hat;
    j["parabolicity"] = probe;
    print(ctx, j);
    return ok;
  };
}

Runner orbit_runner(Context& ctx, bool write_trace, bool slopes_only) {
  if (ctx.wolff || str(ctx.cfg, "map", "") == "wolff") return wolff_runner(ctx, write_trace, slopes_only);
  auto s = std::make_shared<Schedule>(build_schedule(ctx.cfg));
  const MapHandle map = build_map(ctx.cfg, *s);
  OrbitConfig oc = build_engine(ctx.cfg);
  const std::string path = write_trace ? output_path(ctx) : "";
  const TraceFormat fmt = parse_trace_format(str(section(ctx.cfg, "output"), "format", "csv"));
  const long long dec = static_cast<long long>(num(section(ctx.cfg, "output"), "decimation", 1));
  return [&ctx, s, map, oc, path, fmt, dec, slopes_only]() mutable {
    std::unique_ptr<std::ofstream> file;
    std::unique_ptr<TraceWriter> writer;
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw ConfigError("cannot write '" + path + "'");
      writer = std::make_unique<TraceWriter>(*file, fmt, dec);
      oc.sink = [&writer](const Checkpoint& cp) { writer->write(cp); };
    }
    const OrbitTrace tr = iterate(map, oc);
    Json j = slopes_only ? Json::object() : trace_summary(tr);
    if (tr.events.size() >= 2 && tr.tail_points >= 2) {
      j["slope_report"] = to_json(slope_report(tr, s->angle(), oc.tol_arg));
    } else if (slopes_only) {
      throw DomainError("insufficient transit");
    } else {
      j["slope_report"] = nullptr;
    }
    print(ctx, j);
    return ok;
  };
}

std::vector<double> density_grid(const Json& cfg) {
  const Json& g = section(section(cfg, "herglotz"), "grid");
  const double lo = num(g, "t_min", -100.0), hi = num(g, "t_max", 100.0);
  const int n = integer(g, "n", 401);
  const std::string spacing = str(g, "spacing", "linear");
  if (n < 2 || !(lo < hi)) throw ConfigError("herglotz.grid needs n >= 2 and t_min < t_max");
  std::vector<double> ts;
  if (spacing == "linear") {
    for (int i = 0; i < n; ++i) ts.push_back(lo + (hi - lo) * i / (n - 1));
  } else if (spacing == "symlog") {
    // +-10^x for x spread over [log10 t_min_abs, log10 t_max], t_min is the smallest magnitude.
    if (!(lo > 0.0)) throw ConfigError("symlog grids need 0 < t_min < t_max");
    const double a = std::log10(lo), b = std::log10(hi);
    const int half = n / 2;
    for (int i = half - 1; i >= 0; --i) ts.push_back(-std::pow(10.0, a + (b - a) * i / std::max(1, half - 1)));
    for (int i = 0; i < n - half; ++i) ts.push_back(std::pow(10.0, a + (b - a) * i / std::max(1, n - half - 1)));
  } else {
    throw ConfigError("herglotz.grid.spacing must be linear or symlog");
  }
  return ts;
}

Runner cmd_density(Context& ctx) {
  auto s = std::make_shared<Schedule>(build_schedule(ctx.cfg));
  const std::vector<double> ts = density_grid(ctx.cfg);
  const std::string path = output_path(ctx);
  return [&ctx, s, ts, path] {
    std::unique_ptr<std::ofstream> file;
    std::ostream& os = open_output(ctx, file, path);
    write_density_csv(os, *s, s->angle(), ts);
    return ok;
  };
}

Runner cmd_reconstruct(Context& ctx) {
  auto s = std::make_shared<Schedule>(build_schedule(ctx.cfg));
  const Json& h = section(ctx.cfg, "herglotz");
  const double tol = num(h, "tol", 1e-5);
  std::vector<std::complex<double>> Z{{0, 1}, {1, 1}, {0, 10}, {-3, 2}};
  if (h.contains("points")) {
    Z.clear();
    for (const Json& p : h["points"]) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("herglotz.points entries must be [re, im]");
      Z.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  const QuadOptions q = build_quad(ctx);
  return [&ctx, s, tol, Z, q] {
    const ReconstructResult r = reconstruct_check(*s, s->angle(), Z, tol, q);
    const MomentResult m = moment_abs(*s, s->angle(), q);
    Json j{{"tol", tol}, {"reconstruction", to_json(r)}, {"moment_abs", to_json(m)}};
    if (m.certified) {
      const BetaResult b = beta_of(*s, s->angle(), q);
      j["beta"] = {{"value", b.value}, {"error", b.error}};
    }
    print(ctx, j);
    return r.passed ? ok : numeric_failure;
  };
}

int env_threads() {
  if (const char* v = std::getenv("SLOPELAB_THREADS")) {
    try {
      return std::max(1, std::stoi(v));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"slopelab: schedules, orbits and boundary measures of parabolic half-plane maps", "slopelab"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  ctx.threads = env_threads();
  app.add_option("-c,--config", config_path, "JSON run configuration");
  app.add_option("-s,--set", overrides, "Override a config key: dotted.path=value");
  app.add_option("-o,--out", ctx.out_path, "Output file (trace, schedule or density)");
  app.add_option("-j,--threads", ctx.threads, "Worker threads for quadrature (env SLOPELAB_THREADS)");
  app.add_flag("--wolff", ctx.wolff, "Use the Wolff map preset");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "Check a schedule against every condition"},
      {"synthesize", "Build a schedule and write it as JSON"},
      {"simulate", "Iterate the map, write a trace and print the slope report"},
      {"slopes", "Iterate the map and print only the slope report"},
      {"density", "Write the boundary density on a grid as CSV"},
      {"reconstruct", "Compare f(z) - z with its boundary-measure integral"},
      {"wolff-demo", "Iterate Wolff's map and report its argument spread"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  Runner runner;
  try {
    if (!config_path.empty()) ctx.cfg = read_json_file(config_path);
    if (!ctx.cfg.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const std::string& o : overrides) apply_override(ctx.cfg, o);
    if (ctx.threads < 1) throw ConfigError("--threads must be positive");
    if (cmd == "validate") runner = cmd_validate(ctx);
    else if (cmd == "synthesize") runner = cmd_synthesize(ctx);
    else if (cmd == "simulate") runner = orbit_runner(ctx, true, false);
    else if (cmd == "slopes") runner = orbit_runner(ctx, false, true);
    else if (cmd == "density") runner = cmd_density(ctx);
    else if (cmd == "reconstruct") runner = cmd_reconstruct(ctx);
    else runner = wolff_runner(ctx, true, false);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return numeric_failure;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  }

  try {
    return runner();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return numeric_failure;
  }
}

}  // namespace slopelab::cli
