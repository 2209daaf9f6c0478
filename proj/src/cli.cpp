#include "lhvsim/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lhvsim/errors.hpp"
#include "lhvsim/experiment.hpp"
#include "lhvsim/report_io.hpp"

namespace lhvsim {

namespace {

std::vector<double> parse_reals(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (values.size() != expected) {
    throw ConfigError(std::string(flag) + " expects " + std::to_string(expected) +
                      " comma-separated numbers");
  }
  return values;
}

std::array<double, 3> parse_vec3(const std::string& text, const char* flag) {
  const auto v = parse_reals(text, 3, flag);
  return {v[0], v[1], v[2]};
}

// Flags shared by every subcommand that builds an ExperimentConfig.
struct ConfigFlags {
  std::string config_path;
  std::string model;
  std::vector<std::string> params;
  std::string state;
  std::string amplitudes;
  std::string a;
  std::string b;
  std::size_t n_times = 0;
  double horizon = 0.0;
  std::size_t m_lambda = 0;
  std::uint64_t seed = 0;
  std::string variant;
  double omega1 = 0.0;
  std::string axis1;
  double omega2 = 0.0;
  std::string axis2;

  std::map<std::string, CLI::Option*> opts;

  void add_to(CLI::App& app, bool with_config_file) {
    if (with_config_file) {
      opts["config"] = app.add_option("--config", config_path, "JSON config file")
                           ->check(CLI::ExistingFile);
    }
    opts["model"] = app.add_option("--model", model, "hidden-variable model name");
    opts["param"] = app.add_option("--param", params, "model parameter key=value (repeatable)");
    opts["state"] = app.add_option("--state", state, "singlet | product_up | custom");
    opts["amplitudes"] =
        app.add_option("--amplitudes", amplitudes, "8 reals: re0,im0,...,re3,im3 (custom state)");
    opts["a"] = app.add_option("--a", a, "direction of particle 1 as x,y,z");
    opts["b"] = app.add_option("--b", b, "direction of particle 2 as x,y,z");
    opts["n_times"] = app.add_option("--n-times", n_times, "measurement times per station");
    opts["horizon"] = app.add_option("--horizon", horizon, "time horizon T");
    opts["m_lambda"] = app.add_option("--m-lambda", m_lambda, "hidden-variable draws");
    opts["seed"] = app.add_option("--seed", seed, "master seed");
    opts["variant"] = app.add_option("--variant", variant, "standard | general");
    opts["omega1"] = app.add_option("--omega1", omega1, "free-evolution frequency, particle 1");
    opts["axis1"] = app.add_option("--axis1", axis1, "free-evolution axis, particle 1");
    opts["omega2"] = app.add_option("--omega2", omega2, "free-evolution frequency, particle 2");
    opts["axis2"] = app.add_option("--axis2", axis2, "free-evolution axis, particle 2");
  }

  bool given(const std::string& key) const {
    const auto it = opts.find(key);
    return it != opts.end() && it->second->count() > 0;
  }

  ExperimentConfig apply(ExperimentConfig c) const {
    if (given("config")) {
      std::ifstream in(config_path);
      std::stringstream text;
      text << in.rdbuf();
      c = config_from_json(text.str());
    }
    if (given("model") && model != c.model_name) {
      c.model_name = model;
      c.model_params.clear();
    }
    if (given("param")) {
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ConfigError("--param expects key=value, got '" + kv + "'");
        }
        c.model_params[kv.substr(0, eq)] = parse_reals(kv.substr(eq + 1), 1, "--param")[0];
      }
    }
    if (given("state")) {
      if (state == "singlet") {
        c.state = StateKind::singlet;
      } else if (state == "product_up") {
        c.state = StateKind::product_up;
      } else if (state == "custom") {
        c.state = StateKind::custom;
      } else {
        throw ConfigError("unknown state '" + state + "'");
      }
    }
    if (given("amplitudes")) {
      const auto v = parse_reals(amplitudes, 8, "--amplitudes");
      std::copy(v.begin(), v.end(), c.custom_amplitudes.begin());
      if (!given("state")) c.state = StateKind::custom;
    } else if (given("state") && c.state == StateKind::custom && !given("config")) {
      throw ConfigError("--state custom needs --amplitudes");
    }
    if (given("a")) c.a = parse_vec3(a, "--a");
    if (given("b")) c.b = parse_vec3(b, "--b");
    if (given("n_times")) c.n_times = n_times;
    if (given("horizon")) c.horizon = horizon;
    if (given("m_lambda")) c.m_lambda = m_lambda;
    if (given("seed")) c.seed = seed;
    if (given("variant")) {
      if (variant == "standard") {
        c.variant = Variant::standard;
      } else if (variant == "general") {
        c.variant = Variant::general;
      } else {
        throw ConfigError("unknown variant '" + variant + "'");
      }
    }
    if (given("omega1")) c.omega1 = omega1;
    if (given("axis1")) c.axis1 = parse_vec3(axis1, "--axis1");
    if (given("omega2")) c.omega2 = omega2;
    if (given("axis2")) c.axis2 = parse_vec3(axis2, "--axis2");
    return c;
  }
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  file << text;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig checked(const ConfigFlags& flags, ExperimentConfig base, std::ostream& err) {
  ExperimentConfig c = flags.apply(std::move(base));
  std::vector<std::string> warnings;
  validate(c, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return c;
}

int cmd_qm(const ConfigFlags& flags, std::size_t shots, std::ostream& out, std::ostream& err) {
  const ExperimentConfig c = checked(flags, ExperimentConfig{}, err);
  const PureState psi = build_state(c);
  const Direction a{c.a[0], c.a[1], c.a[2]};
  const Direction b{c.b[0], c.b[1], c.b[2]};
  out << "e_qm " << format_real(qm_correlation(psi, a, b)) << '\n';
  out << "marginal_a " << format_real(qm_marginal(psi, a, 1)) << '\n';
  out << "marginal_b " << format_real(qm_marginal(psi, b, 2)) << '\n';
  if (shots > 0) {
    const LocalEvolution ev = build_evolution(c);
    Rng rng(c.seed, streams::kShots);
    long long sum = 0;
    for (std::size_t s = 0; s < shots; ++s) {
      const double t_a = rng.uniform(0.0, c.horizon);
      const double t_b = rng.uniform(0.0, c.horizon);
      const auto [o1, o2] = sequential_measure(psi, a, t_a, b, t_b, ev, rng);
      sum += value(o1) * value(o2);
    }
    const double mean = static_cast<double>(sum) / static_cast<double>(shots);
    out << "sequential_mean " << format_real(mean) << '\n';
    out << "sequential_shots " << shots << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-local hidden-variable models versus two-qubit quantum correlations"};
  app.require_subcommand(1);

  ConfigFlags qm_flags, run_flags, scan_flags, demo_flags;
  std::size_t shots = 0;
  std::size_t steps = 17;
  std::string run_out, scan_out, demo_out;

  CLI::App* qm = app.add_subcommand("qm", "print the quantum correlation and marginals");
  qm_flags.add_to(*qm, false);
  qm->add_option("--shots", shots, "also sample sequential measurements");

  CLI::App* run = app.add_subcommand("run", "run one experiment and write a JSON report");
  run_flags.add_to(*run, true);
  run->add_option("--out", run_out, "report path (default stdout)");

  CLI::App* scan = app.add_subcommand("scan", "sweep the angle between a and b, write CSV");
  scan_flags.add_to(*scan, true);
  scan->add_option("--steps", steps, "number of angles in [0, pi]");
  scan->add_option("--out", scan_out, "CSV path (default stdout)");

  CLI::App* demo = app.add_subcommand("demo", "run the canonical contradiction and print a verdict");
  demo_flags.add_to(*demo, false);
  demo->add_option("--out", demo_out, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (qm->parsed()) return cmd_qm(qm_flags, shots, out, err);
    if (run->parsed()) {
      const RunReport r = run_experiment(checked(run_flags, ExperimentConfig{}, err));
      write_text(run_out, report_to_json(r) + "\n", out);
      return kExitOk;
    }
    if (scan->parsed()) {
      const auto rows = scan_angles(checked(scan_flags, ExperimentConfig{}, err), steps);
      std::ostringstream csv;
      write_scan_csv(csv, rows);
      write_text(scan_out, csv.str(), out);
      return kExitOk;
    }
    if (demo->parsed()) {
      const ExperimentConfig base = demo_config(ExperimentConfig{}.seed);
      const DemoResult d = demo_contradiction(checked(demo_flags, base, err));
      if (!demo_out.empty()) write_text(demo_out, report_to_json(d.report) + "\n", out);
      out << d.verdict << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace lhvsim
