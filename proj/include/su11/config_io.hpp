#ifndef SU11_CONFIG_IO_HPP
#define SU11_CONFIG_IO_HPP

// Versioned JSON documents describing a run or a sweep. Field names mirror
// InterferometerConfig one-to-one; unknown keys are rejected.
//
//   {
//     "schema": "su11-config/1",
//     "preset": "fig4a",                 (optional)
//     "description": "...",              (optional)
//     "baseline": "pre_loss",            (optional: pre_loss | post_loss)
//     "optimize": ["phi"],               (optional)
//     "config": { "g1": 2, ..., "input_a": {"kind": "squeezed_coherent", ...} },
//     "sweep": { "axis": "T", "start": 0, "stop": 1, "points": 101,
//                "scale": "linear", "outputs": ["delta_phi", "sql"] },   (optional)
//     "report": { ... }                  (written by `run --format json`, ignored on input)
//   }

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "su11/sensitivity.hpp"

namespace su11 {

inline constexpr const char* kConfigSchema = "su11-config/1";

enum class Axis { g, phi, T, gamma_tau, r, alpha_mag, n_ph_target };
enum class Scale { linear, log };
enum class Output { delta_phi, sql, hl, lcc, n_ph, var_X, slope };

struct SweepSpec {
  Axis axis = Axis::T;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  Scale scale = Scale::linear;
  std::vector<Output> outputs = {Output::delta_phi, Output::sql};

  void validate() const {
    detail::require(std::isfinite(start) && std::isfinite(stop), ErrorKind::config, "sweep: non-finite range");
    detail::require(points >= 1, ErrorKind::config, "sweep: points must be >= 1");
    detail::require(points >= 2 || start == stop, ErrorKind::config,
                    "sweep: a single-point sweep requires start == stop");
    detail::require(scale == Scale::linear || (start > 0.0 && stop > 0.0), ErrorKind::config,
                    "sweep: log scale requires a positive range");
    detail::require(!outputs.empty(), ErrorKind::config, "sweep: no outputs requested");
  }
};

struct Document {
  std::string schema = kConfigSchema;
  std::string preset;
  std::string description;
  Baseline baseline = Baseline::pre_loss;
  std::vector<FreeParam> optimize;
  InterferometerConfig config;
  std::optional<SweepSpec> sweep;
};

namespace io {

using nlohmann::json;

template <class E>
struct EnumName {
  E value;
  const char* name;
};

inline constexpr EnumName<Axis> kAxisNames[] = {
    {Axis::g, "g"},     {Axis::phi, "phi"},   {Axis::T, "T"},
    {Axis::gamma_tau, "gamma_tau"}, {Axis::r, "r"}, {Axis::alpha_mag, "alpha_mag"},
    {Axis::n_ph_target, "n_ph_target"},
};
inline constexpr EnumName<Output> kOutputNames[] = {
    {Output::delta_phi, "delta_phi"}, {Output::sql, "sql"},     {Output::hl, "hl"},
    {Output::lcc, "lcc"},             {Output::n_ph, "n_ph"},   {Output::var_X, "var_X"},
    {Output::slope, "slope"},
};
inline constexpr EnumName<InputKind> kKindNames[] = {
    {InputKind::vacuum, "vacuum"},
    {InputKind::coherent, "coherent"},
    {InputKind::squeezed_coherent, "squeezed_coherent"},
};
inline constexpr EnumName<FreeParam> kFreeNames[] = {
    {FreeParam::phi, "phi"}, {FreeParam::theta_s, "theta_s"}, {FreeParam::theta_alpha, "theta_alpha"}};
inline constexpr EnumName<Scale> kScaleNames[] = {{Scale::linear, "linear"}, {Scale::log, "log"}};
inline constexpr EnumName<Baseline> kBaselineNames[] = {{Baseline::pre_loss, "pre_loss"},
                                                        {Baseline::post_loss, "post_loss"}};

template <class E, std::size_t N>
E parse_enum(const std::string& s, const EnumName<E> (&table)[N], const char* what) {
  for (const auto& e : table)
    if (s == e.name) return e.value;
  throw Error(ErrorKind::config, std::string("unknown ") + what + " '" + s + "'");
}

template <class E, std::size_t N>
std::string enum_name(E v, const EnumName<E> (&table)[N]) {
  for (const auto& e : table)
    if (v == e.value) return e.name;
  return "?";
}

inline std::string name(Axis a) { return enum_name(a, kAxisNames); }
inline std::string name(Output o) { return enum_name(o, kOutputNames); }
inline std::string name(InputKind k) { return enum_name(k, kKindNames); }
inline std::string name(Scale s) { return enum_name(s, kScaleNames); }
inline Output parse_output(const std::string& s) { return parse_enum(s, kOutputNames, "output"); }
inline FreeParam parse_free_param(const std::string& s) { return parse_enum(s, kFreeNames, "free parameter"); }

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  detail::require(obj.is_object(), ErrorKind::config, where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    detail::require(ok, ErrorKind::config, where + ": unknown field '" + key + "'");
  }
}

inline double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  detail::require(v.is_number(), ErrorKind::config, where + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::string get_string(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  detail::require(v.is_string(), ErrorKind::config, where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline InputSpec input_from_json(const json& j, const std::string& where) {
  check_keys(j, {"kind", "alpha_mag", "alpha_phase", "r", "theta_s"}, where);
  detail::require(j.contains("kind"), ErrorKind::config, where + ": missing 'kind'");
  InputSpec s;
  s.kind = parse_enum(get_string(j, "kind", where), kKindNames, "input kind");
  s.alpha_mag = get_number(j, "alpha_mag", 0.0, where);
  s.alpha_phase = get_number(j, "alpha_phase", 0.0, where);
  s.r = get_number(j, "r", 0.0, where);
  s.theta_s = get_number(j, "theta_s", 0.0, where);
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, where + ": " + e.what());
  }
  return s;
}

inline json input_to_json(const InputSpec& s) {
  json j{{"kind", name(s.kind)}};
  if (s.kind != InputKind::vacuum) {
    j["alpha_mag"] = s.alpha_mag;
    j["alpha_phase"] = s.alpha_phase;
  }
  if (s.kind == InputKind::squeezed_coherent) {
    j["r"] = s.r;
    j["theta_s"] = s.theta_s;
  }
  return j;
}

inline InterferometerConfig config_from_json(const json& j) {
  const std::string where = "config";
  check_keys(j, {"g1", "g2", "theta1", "theta2", "phi", "T", "gamma_tau", "input_a", "input_b"}, where);
  InterferometerConfig c;
  c.g1 = get_number(j, "g1", c.g1, where);
  c.g2 = get_number(j, "g2", c.g2, where);
  c.theta1 = get_number(j, "theta1", c.theta1, where);
  c.theta2 = get_number(j, "theta2", c.theta2, where);
  c.phi = get_number(j, "phi", c.phi, where);
  c.T = get_number(j, "T", c.T, where);
  c.gamma_tau = get_number(j, "gamma_tau", c.gamma_tau, where);
  if (j.contains("input_a")) c.input_a = input_from_json(j.at("input_a"), "config.input_a");
  if (j.contains("input_b")) c.input_b = input_from_json(j.at("input_b"), "config.input_b");
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  return c;
}

inline json config_to_json(const InterferometerConfig& c) {
  return json{{"g1", c.g1},   {"g2", c.g2}, {"theta1", c.theta1},       {"theta2", c.theta2},
              {"phi", c.phi}, {"T", c.T},   {"gamma_tau", c.gamma_tau}, {"input_a", input_to_json(c.input_a)},
              {"input_b", input_to_json(c.input_b)}};
}

inline SweepSpec sweep_from_json(const json& j) {
  const std::string where = "sweep";
  check_keys(j, {"axis", "start", "stop", "points", "scale", "outputs"}, where);
  for (const char* k : {"axis", "start", "stop", "points"}) {
    detail::require(j.contains(k), ErrorKind::config, where + ": missing '" + k + "'");
  }
  SweepSpec s;
  s.axis = parse_enum(get_string(j, "axis", where), kAxisNames, "sweep axis");
  s.start = get_number(j, "start", 0.0, where);
  s.stop = get_number(j, "stop", 0.0, where);
  detail::require(j.at("points").is_number_integer(), ErrorKind::config, "sweep.points: expected an integer");
  s.points = j.at("points").get<int>();
  if (j.contains("scale")) s.scale = parse_enum(get_string(j, "scale", where), kScaleNames, "sweep scale");
  if (j.contains("outputs")) {
    detail::require(j.at("outputs").is_array(), ErrorKind::config, "sweep.outputs: expected an array");
    s.outputs.clear();
    std::set<Output> seen;
    for (const json& o : j.at("outputs")) {
      detail::require(o.is_string(), ErrorKind::config, "sweep.outputs: expected strings");
      const Output out = parse_output(o.get<std::string>());
      detail::require(seen.insert(out).second, ErrorKind::config, "sweep.outputs: duplicate entry");
      s.outputs.push_back(out);
    }
  }
  s.validate();
  return s;
}

inline json sweep_to_json(const SweepSpec& s) {
  json outs = json::array();
  for (Output o : s.outputs) outs.push_back(name(o));
  return json{{"axis", name(s.axis)}, {"start", s.start},         {"stop", s.stop},
              {"points", s.points},   {"scale", name(s.scale)}, {"outputs", outs}};
}

inline Document document_from_json(const json& j) {
  check_keys(j, {"schema", "preset", "description", "baseline", "optimize", "config", "sweep", "report"},
             "document");
  detail::require(j.contains("schema"), ErrorKind::config, "document: missing 'schema'");
  Document d;
  d.schema = get_string(j, "schema", "document");
  detail::require(d.schema == kConfigSchema, ErrorKind::config,
                  "document: unsupported schema '" + d.schema + "' (expected " + kConfigSchema + ")");
  if (j.contains("preset")) d.preset = get_string(j, "preset", "document");
  if (j.contains("description")) d.description = get_string(j, "description", "document");
  if (j.contains("baseline")) d.baseline = parse_enum(get_string(j, "baseline", "document"), kBaselineNames, "baseline");
  if (j.contains("optimize")) {
    detail::require(j.at("optimize").is_array(), ErrorKind::config, "optimize: expected an array");
    for (const json& p : j.at("optimize")) {
      detail::require(p.is_string(), ErrorKind::config, "optimize: expected strings");
      d.optimize.push_back(parse_free_param(p.get<std::string>()));
    }
  }
  detail::require(j.contains("config"), ErrorKind::config, "document: missing 'config'");
  d.config = config_from_json(j.at("config"));
  if (j.contains("sweep")) d.sweep = sweep_from_json(j.at("sweep"));
  return d;
}

inline json document_to_json(const Document& d) {
  json j{{"schema", d.schema}};
  if (!d.preset.empty()) j["preset"] = d.preset;
  if (!d.description.empty()) j["description"] = d.description;
  j["baseline"] = enum_name(d.baseline, kBaselineNames);
  if (!d.optimize.empty()) {
    json o = json::array();
    for (FreeParam p : d.optimize) o.push_back(enum_name(p, kFreeNames));
    j["optimize"] = o;
  }
  j["config"] = config_to_json(d.config);
  if (d.sweep) j["sweep"] = sweep_to_json(*d.sweep);
  return j;
}

inline json report_to_json(const SensitivityReport& r) {
  return json{{"phi", r.phi},     {"mean_X", r.mean_x},
              {"slope", r.slope}, {"var_X", r.var_x},
              {"delta_phi", r.delta_phi}, {"n_ph", r.n_ph},
              {"sql", r.sql},     {"hl", r.hl},
              {"path_disagreement", r.path_disagreement},
              {"baseline", enum_name(r.baseline, kBaselineNames)}};
}

inline Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("malformed JSON: ") + e.what());
  }
  return document_from_json(j);
}

inline Document load_document(const std::string& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), ErrorKind::config, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

}  // namespace io
}  // namespace su11

#endif  // SU11_CONFIG_IO_HPP
