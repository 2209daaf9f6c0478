#include "lhvsim/report_io.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include <json.hpp>

#include "lhvsim/errors.hpp"

namespace lhvsim {

using nlohmann::json;

std::string state_name(StateKind kind) {
  switch (kind) {
    case StateKind::singlet:
      return "singlet";
    case StateKind::product_up:
      return "product_up";
    case StateKind::custom:
      return "custom";
  }
  return "unknown";
}

std::string variant_name(Variant variant) {
  return variant == Variant::general ? "general" : "standard";
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model_name;
  j["model_params"] = c.model_params;
  j["state"] = state_name(c.state);
  if (c.state == StateKind::custom) j["amplitudes"] = c.custom_amplitudes;
  j["a"] = c.a;
  j["b"] = c.b;
  j["n_times"] = c.n_times;
  j["horizon"] = c.horizon;
  j["m_lambda"] = c.m_lambda;
  j["seed"] = c.seed;
  j["variant"] = variant_name(c.variant);
  j["evolution"] = {{"omega1", c.omega1}, {"axis1", c.axis1},
                    {"omega2", c.omega2}, {"axis2", c.axis2}};
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, v] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

std::size_t read_count(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

ExperimentConfig config_from(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"model", "model_params", "state", "amplitudes", "a", "b", "n_times", "horizon",
                  "m_lambda", "seed", "variant", "evolution"},
                 "config");
  ExperimentConfig c;
  read(j, "model", c.model_name);
  read(j, "model_params", c.model_params);
  if (j.contains("state")) {
    std::string s;
    read(j, "state", s);
    if (s == "singlet") {
      c.state = StateKind::singlet;
    } else if (s == "product_up") {
      c.state = StateKind::product_up;
    } else if (s == "custom") {
      c.state = StateKind::custom;
    } else {
      throw ConfigError("unknown state '" + s + "'");
    }
  }
  read(j, "amplitudes", c.custom_amplitudes);
  if (c.state == StateKind::custom && !j.contains("amplitudes")) {
    throw ConfigError("state 'custom' needs 8 amplitudes");
  }
  read(j, "a", c.a);
  read(j, "b", c.b);
  c.n_times = read_count(j, "n_times", c.n_times);
  read(j, "horizon", c.horizon);
  c.m_lambda = read_count(j, "m_lambda", c.m_lambda);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a 64-bit unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("variant")) {
    std::string v;
    read(j, "variant", v);
    if (v == "standard") {
      c.variant = Variant::standard;
    } else if (v == "general") {
      c.variant = Variant::general;
    } else {
      throw ConfigError("unknown variant '" + v + "'");
    }
  }
  if (j.contains("evolution")) {
    const json& e = j.at("evolution");
    if (!e.is_object()) throw ConfigError("evolution must be an object");
    reject_unknown(e, {"omega1", "axis1", "omega2", "axis2"}, "evolution");
    read(e, "omega1", c.omega1);
    read(e, "axis1", c.axis1);
    read(e, "omega2", c.omega2);
    read(e, "axis2", c.axis2);
  }
  return c;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

ExperimentConfig config_from_json(const std::string& text) { return config_from(parse(text)); }

std::string report_to_json(const RunReport& r) {
  json j;
  j["config"] = config_json(r.config);
  j["results"] = {{"e_qm", r.e_qm},
                  {"e_model_mean", r.e_model_mean},
                  {"e_model_stderr", r.e_model_stderr},
                  {"avg_a_mean", r.avg_a_mean},
                  {"avg_a_stderr", r.avg_a_stderr},
                  {"avg_b_mean", r.avg_b_mean},
                  {"avg_b_stderr", r.avg_b_stderr},
                  {"gap", r.gap},
                  {"lambda_dependence_score", r.lambda_dependence_score}};
  j["postulates"] = {{"time_local_a", r.postulates.time_local_a},
                     {"time_local_b", r.postulates.time_local_b},
                     {"lambda_independent_time_averages",
                      r.postulates.lambda_independent_time_averages},
                     {"superdeterministic_directions", r.postulates.superdeterministic_directions}};
  j["wall_time_seconds"] = r.wall_time_seconds;
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  const json j = parse(text);
  RunReport r;
  try {
    r.config = config_from(j.at("config"));
    const json& res = j.at("results");
    r.e_qm = res.at("e_qm").get<double>();
    r.e_model_mean = res.at("e_model_mean").get<double>();
    r.e_model_stderr = res.at("e_model_stderr").get<double>();
    r.avg_a_mean = res.at("avg_a_mean").get<double>();
    r.avg_a_stderr = res.at("avg_a_stderr").get<double>();
    r.avg_b_mean = res.at("avg_b_mean").get<double>();
    r.avg_b_stderr = res.at("avg_b_stderr").get<double>();
    r.gap = res.at("gap").get<double>();
    r.lambda_dependence_score = res.at("lambda_dependence_score").get<double>();
    const json& p = j.at("postulates");
    r.postulates.time_local_a = p.at("time_local_a").get<bool>();
    r.postulates.time_local_b = p.at("time_local_b").get<bool>();
    r.postulates.lambda_independent_time_averages =
        p.at("lambda_independent_time_averages").get<bool>();
    r.postulates.superdeterministic_directions = p.at("superdeterministic_directions").get<bool>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << kScanHeader << '\n';
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.theta, r.e_qm,
                  r.e_model, r.std_error, r.gap);
    out << line;
  }
}

}  // namespace lhvsim
