// Copyright 2026 The nlhvlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlhv/inequality.hpp"
#include "nlhv/models.hpp"
#include "nlhv/serialize.hpp"
#include "nlhv/stats.hpp"
#include "nlhv/svg.hpp"
#include "nlhv/verify.hpp"

using nlohmann::json;

namespace {

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Angles require an explicit unit suffix so radians and degrees cannot
// be silently confused: "30deg", "0.5rad".
double parse_angle(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  double scale;
  if (s.size() > 3 && s.substr(s.size() - 3) == "deg") {
    scale = M_PI / 180.0;
    s = s.substr(0, s.size() - 3);
  } else if (s.size() > 3 && s.substr(s.size() - 3) == "rad") {
    scale = 1.0;
    s = s.substr(0, s.size() - 3);
  } else {
    throw std::invalid_argument("angle \"" + text + "\" needs a deg or rad suffix");
  }
  size_t pos = 0;
  double value;
  try {
    value = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse angle \"" + text + "\"");
  }
  if (pos != s.size()) throw std::invalid_argument("cannot parse angle \"" + text + "\"");
  return value * scale;
}

// "30deg" or "10deg,20deg" or an inclusive range "0deg:180deg:1deg".
std::vector<double> parse_angle_spec(const std::string& spec) {
  std::vector<double> out;
  std::stringstream list(spec);
  std::string item;
  while (std::getline(list, item, ',')) {
    const size_t c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_angle(item));
      continue;
    }
    const size_t c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw std::invalid_argument("angle range needs start:stop:step, got \"" + item + "\"");
    }
    const double start = parse_angle(item.substr(0, c1));
    const double stop = parse_angle(item.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_angle(item.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) {
      throw std::invalid_argument("angle range needs stop >= start and step > 0");
    }
    for (int k = 0;; ++k) {
      const double a = start + k * step;
      if (a > stop + 1e-9 * step) break;
      out.push_back(a);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty angle list");
  return out;
}

nlhv::Plane parse_plane(const std::string& text) {
  if (text == "xy") return nlhv::Plane::xy();
  if (text == "xz") return nlhv::Plane::xz();
  if (text == "yz") return nlhv::Plane::yz();
  if (text.rfind("custom:", 0) == 0) {
    // custom:nx/ny/nz gives the plane through the origin with that normal.
    const std::string rest = text.substr(7);
    double c[3];
    int i = 0;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, '/')) {
      if (i >= 3) throw std::invalid_argument("plane normal needs exactly 3 components");
      c[i++] = std::stod(tok);
    }
    if (i != 3) throw std::invalid_argument("plane normal needs exactly 3 components");
    return nlhv::Plane::from_normal(nlhv::UnitVec::normalized({c[0], c[1], c[2]}));
  }
  throw std::invalid_argument("unknown plane \"" + text + "\" (xy, xz, yz, or custom:nx/ny/nz)");
}

// Two planes separated by ';' (or ',' when no ';' is present).
std::pair<nlhv::Plane, nlhv::Plane> parse_plane_pair(const std::string& text) {
  const char sep = text.find(';') != std::string::npos ? ';' : ',';
  const size_t cut = text.find(sep);
  if (cut == std::string::npos) {
    throw std::invalid_argument("expected two planes, e.g. xy,xz");
  }
  return {parse_plane(text.substr(0, cut)), parse_plane(text.substr(cut + 1))};
}

nlhv::UnitVec parse_direction(const std::string& text) {
  double c[3];
  int i = 0;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (i >= 3) throw std::invalid_argument("direction needs exactly 3 components");
    c[i++] = std::stod(tok);
  }
  if (i != 3) throw std::invalid_argument("direction needs exactly 3 components");
  return nlhv::UnitVec::normalized({c[0], c[1], c[2]});
}

// A model argument is shorthand ("qm", a coupling name), inline JSON, or
// a path to a JSON file.
nlhv::ModelSpec resolve_model_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return nlhv::parse_model_spec_text(arg);
  std::ifstream f(arg);
  if (f) {
    std::stringstream buf;
    buf << f.rdbuf();
    return nlhv::parse_model_spec_text(buf.str());
  }
  return nlhv::model_spec_from_shorthand(arg);
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output path \"" + path + "\"");
  f << content;
  f.flush();
  if (!f) throw std::invalid_argument("failed to write output path \"" + path + "\"");
}

std::string csv_config_line(const json& config) {
  return "# config " + config.dump() + "\n";
}

struct BoundArgs {
  std::string alpha_spec = "0deg:180deg:1deg";
  std::string format = "csv";
  std::string out = "-";
};

int cmd_bound(const BoundArgs& args) {
  const std::vector<double> alphas = parse_angle_spec(args.alpha_spec);
  json config{{"command", "bound"}, {"alpha", args.alpha_spec}, {"format", args.format},
              {"out", args.out}};
  if (args.format == "csv") {
    std::string text = csv_config_line(config) + "alpha_rad,alpha_deg,bound\n";
    for (const double a : alphas) {
      text += g12(a) + "," + g12(a * 180.0 / M_PI) + "," + g12(nlhv::leggett_bound(a)) + "\n";
    }
    write_output(args.out, text);
  } else {
    json rows = json::array();
    for (const double a : alphas) {
      rows.push_back({{"alpha_rad", a}, {"bound", nlhv::leggett_bound(a)}});
    }
    write_output(args.out, json{{"config", config}, {"rows", rows}}.dump(2) + "\n");
  }
  return 0;
}

struct PowerArgs {
  double expected_corr = 0.0;
  double target_stderr = 0.0;
  std::string out = "-";
};

int cmd_power(const PowerArgs& args) {
  const std::uint64_t n = nlhv::required_pairs(args.expected_corr, args.target_stderr);
  const double mean = 0.5 * (args.expected_corr + 1.0);
  json config{{"command", "power"},
              {"E", args.expected_corr},
              {"target_stderr", args.target_stderr},
              {"out", args.out}};
  json result{{"config", config},
              {"n", n},
              {"sample_mean", mean},
              {"stderr_at_n", 2.0 * std::sqrt(mean * (1.0 - mean) / static_cast<double>(n))}};
  write_output(args.out, result.dump(2) + "\n");
  return 0;
}

struct SimulateArgs {
  std::string model = "qm";
  std::string alpha = "0rad";
  std::string plane = "xy";
  std::string sigma = "0rad";
  std::string a_dir, b_dir;
  std::uint64_t n = 10000;
  double duration = 0.0;
  double rate = 0.0;
  std::uint64_t seed = 1;
  std::string variance = "n";
  int repeat = 1;
  std::string format = "json";
  std::string out = "-";
};

int cmd_simulate(const SimulateArgs& args) {
  const nlhv::ModelSpec spec = resolve_model_arg(args.model);
  const auto model = nlhv::build_model(spec);

  nlhv::UnitVec a, b;
  std::string plane_label;
  double alpha;
  if (!args.a_dir.empty() || !args.b_dir.empty()) {
    if (args.a_dir.empty() || args.b_dir.empty()) {
      throw std::invalid_argument("--a and --b must be given together");
    }
    a = parse_direction(args.a_dir);
    b = parse_direction(args.b_dir);
    plane_label = "explicit";
    alpha = nlhv::angle_between(a, b);
  } else {
    const nlhv::Plane plane = parse_plane(args.plane);
    alpha = parse_angle(args.alpha);
    const double sigma = parse_angle(args.sigma);
    const nlhv::SettingPair s = nlhv::settings_in_plane(plane, alpha, sigma);
    a = s.a;
    b = s.b;
    plane_label = plane.label;
  }

  const bool use_duration = args.duration > 0.0 || args.rate > 0.0;
  if (use_duration && (!(args.duration > 0.0) || !(args.rate > 0.0))) {
    throw std::invalid_argument("--duration and --rate must be given together");
  }
  const nlhv::VarianceConvention convention = args.variance == "n-1"
                                                  ? nlhv::VarianceConvention::NMinus1
                                                  : nlhv::VarianceConvention::N;
  if (args.repeat < 1) throw std::invalid_argument("--repeat must be at least 1");

  const std::uint64_t base_seed = spec.seed.value_or(args.seed);
  json config{{"command", "simulate"}, {"model", nlhv::to_json(spec)},
              {"alpha_rad", alpha},     {"plane", plane_label},
              {"seed", base_seed},      {"variance", args.variance},
              {"repeat", args.repeat},  {"format", args.format},
              {"out", args.out}};
  if (use_duration) {
    config["duration_s"] = args.duration;
    config["rate_hz"] = args.rate;
  } else {
    config["n"] = args.n;
  }

  const nlhv::Schedule schedule = use_duration
                                      ? nlhv::Schedule::duration_rate(args.duration, args.rate)
                                      : nlhv::Schedule::fixed_count(args.n);

  json runs = json::array();
  std::string csv = csv_config_line(config) + "seed,model,alpha_rad,plane,n,n_same,C,stderr\n";
  for (int rep = 0; rep < args.repeat; ++rep) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(rep);
    nlhv::RngStream rng(seed, 0);
    const nlhv::CountData counts = nlhv::run_experiment(*model, a, b, schedule, rng);
    const nlhv::CorrelationEstimate est = nlhv::estimate_correlation(counts, convention);
    json run{{"seed", seed},
             {"counts", nlhv::to_json(counts)},
             {"estimate", nlhv::to_json(est)},
             {"stderr_poisson", nlhv::stderr_poisson_propagation(counts.n_same, counts.n_diff)}};
    runs.push_back(run);
    csv += std::to_string(seed) + "," + model->name() + "," + g12(alpha) + "," + plane_label +
           "," + std::to_string(counts.n()) + "," + std::to_string(counts.n_same) + "," +
           g12(est.value) + "," + g12(est.std_error) + "\n";
  }

  if (args.format == "csv") {
    write_output(args.out, csv);
  } else {
    json result{{"config", config}, {"runs", runs}};
    write_output(args.out, result.dump(2) + "\n");
  }
  return 0;
}

struct SweepArgs {
  std::vector<std::string> models = {"qm", "anti-comonotone", "comonotone", "independent"};
  std::string alpha_spec = "0deg:180deg:1deg";
  std::string planes = "xy,xz";
  std::string method = "quadrature";
  int nodes = 256;
  std::uint64_t samples = 1000000;  // per correlation, monte carlo method
  std::uint64_t seed = 1;
  int threads = 1;
  bool allow_non_orthogonal = false;
  std::string out = "-";
  std::string svg_out;
};

int cmd_sweep(const SweepArgs& args) {
  const std::vector<double> alphas = parse_angle_spec(args.alpha_spec);
  const auto [p1, p2] = parse_plane_pair(args.planes);

  std::vector<nlhv::ModelSpec> specs;
  json model_json = json::array();
  for (const std::string& m : args.models) {
    specs.push_back(resolve_model_arg(m));
    model_json.push_back(nlhv::to_json(specs.back()));
  }

  json config{{"command", "sweep"},   {"models", model_json},
              {"alpha", args.alpha_spec}, {"alpha_count", alphas.size()},
              {"planes", json::array({p1.label, p2.label})},
              {"method", args.method}, {"nodes", args.nodes},
              {"seed", args.seed},     {"allow_non_orthogonal", args.allow_non_orthogonal},
              {"out", args.out}};
  if (args.method == "mc") {
    config["samples"] = args.samples;
    config["threads"] = args.threads;
  }

  std::string csv =
      csv_config_line(config) +
      "model,alpha_rad,alpha_deg,e_xy_alpha,e_xy_0,e_xz_alpha,e_xz_0,lhs,bound,margin,violated,"
      "lhs_stderr\n";
  std::vector<nlhv::SvgSeries> series;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  for (size_t mi = 0; mi < specs.size(); ++mi) {
    const auto model = nlhv::build_model(specs[mi]);
    nlhv::SvgSeries s;
    s.label = model->name();
    s.color = palette[mi % 6];
    for (size_t ai = 0; ai < alphas.size(); ++ai) {
      const double alpha = alphas[ai];
      nlhv::AveragingMethod method = nlhv::QuadratureAverage{args.nodes};
      if (args.method == "closed-form") {
        method = nlhv::ClosedFormAverage{};
      } else if (args.method == "mc") {
        nlhv::MonteCarloAverage mc;
        mc.nodes = args.nodes;
        mc.samples_per_node =
            (args.samples + static_cast<std::uint64_t>(args.nodes) - 1) /
            static_cast<std::uint64_t>(args.nodes);
        mc.seed = specs[mi].seed.value_or(args.seed);
        mc.stream_base = (mi * alphas.size() + ai) * 4 * static_cast<std::uint64_t>(args.nodes);
        mc.threads = args.threads;
        method = mc;
      } else if (args.method != "quadrature") {
        throw std::invalid_argument("unknown method \"" + args.method + "\"");
      }
      const nlhv::InequalityReport rep = nlhv::evaluate_inequality(
          *model, alpha, p1, p2, method, args.allow_non_orthogonal);
      csv += model->name() + "," + g12(rep.alpha) + "," + g12(rep.alpha * 180.0 / M_PI) + "," +
             g12(rep.e_xy_alpha) + "," + g12(rep.e_xy_0) + "," + g12(rep.e_xz_alpha) + "," +
             g12(rep.e_xz_0) + "," + g12(rep.lhs) + "," + g12(rep.bound) + "," + g12(rep.margin) +
             "," + (rep.violated ? "true" : "false") + "," + g12(rep.lhs_std_error) + "\n";
      s.points.emplace_back(rep.alpha * 180.0 / M_PI, rep.lhs);
    }
    series.push_back(std::move(s));
  }

  nlhv::SvgSeries bound_series;
  bound_series.label = "bound";
  bound_series.color = "#000000";
  bound_series.dashed = true;
  for (const double alpha : alphas) {
    bound_series.points.emplace_back(alpha * 180.0 / M_PI, nlhv::leggett_bound(alpha));
  }
  series.push_back(std::move(bound_series));

  write_output(args.out, csv);
  if (!args.svg_out.empty()) {
    write_output(args.svg_out,
                 nlhv::render_line_chart("Two-plane correlation sum vs bound",
                                         "separation alpha (degrees)", "lhs and bound", series,
                                         880, 560, "config " + config.dump()));
  }
  return 0;
}

struct VerifyArgs {
  std::uint64_t seed = 20260818;
  std::uint64_t samples = 200000;
  int nodes = 256;
  int grid = 19;
  int malus_pairs = 4;
  int lemma_trials = 25;
  std::uint64_t sphere_samples = 1000000;
  double inject_bias = 0.0;
  std::string format = "text";
  std::string out = "-";
};

int cmd_verify(const VerifyArgs& args) {
  nlhv::VerifyOptions options;
  options.seed = args.seed;
  options.samples = args.samples;
  options.nodes = args.nodes;
  options.grid = args.grid;
  options.malus_pairs = args.malus_pairs;
  options.lemma_trials = args.lemma_trials;
  options.sphere_samples = args.sphere_samples;
  options.inject_bias = args.inject_bias;

  const nlhv::VerifyReport report = nlhv::run_verification(options);

  json config{{"command", "verify"},         {"seed", args.seed},
              {"samples", args.samples},     {"nodes", args.nodes},
              {"grid", args.grid},           {"malus_pairs", args.malus_pairs},
              {"lemma_trials", args.lemma_trials}, {"sphere_samples", args.sphere_samples},
              {"inject_bias", args.inject_bias},   {"out", args.out}};

  if (args.format == "json") {
    json checks = json::array();
    for (const auto& c : report.checks) {
      checks.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"observed", c.observed},
                        {"threshold", c.threshold},
                        {"detail", c.detail}});
    }
    write_output(args.out,
                 json{{"config", config}, {"checks", checks}, {"all_pass", report.all_pass}}
                         .dump(2) +
                     "\n");
  } else {
    std::string text = "config " + config.dump() + "\n";
    for (const auto& c : report.checks) {
      text += std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name + ": " + c.detail + "\n";
    }
    text += report.all_pass ? "all checks passed\n" : "CHECKS FAILED\n";
    write_output(args.out, text);
  }
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation laboratory for nonlocal hidden-variable models of entangled photon pairs"};
  app.require_subcommand(1);

  BoundArgs bound_args;
  CLI::App* bound = app.add_subcommand("bound", "Tabulate the two-plane correlation bound");
  bound->add_option("--alpha", bound_args.alpha_spec, "Angle list or start:stop:step (deg/rad suffix)");
  bound->add_option("--format", bound_args.format)->check(CLI::IsMember({"csv", "json"}));
  bound->add_option("--out", bound_args.out, "Output path, - for stdout");

  PowerArgs power_args;
  CLI::App* power = app.add_subcommand("power", "Pairs needed to reach a target standard error");
  power->add_option("--E", power_args.expected_corr, "Expected correlation, |E| < 1")->required();
  power->add_option("--target-stderr", power_args.target_stderr)->required();
  power->add_option("--out", power_args.out);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "Run one simulated coincidence experiment");
  sim->add_option("--model", sim_args.model, "qm, a coupling name, inline JSON, or a JSON file");
  sim->add_option("--alpha", sim_args.alpha, "Analyzer separation (deg/rad suffix)");
  sim->add_option("--plane", sim_args.plane, "xy, xz, yz, or custom:nx/ny/nz");
  sim->add_option("--sigma", sim_args.sigma, "Rotation of the pair inside the plane");
  sim->add_option("--a", sim_args.a_dir, "Explicit setting a as x,y,z (overrides plane/alpha)");
  sim->add_option("--b", sim_args.b_dir, "Explicit setting b as x,y,z");
  sim->add_option("--n", sim_args.n, "Fixed number of pairs");
  sim->add_option("--duration", sim_args.duration, "Acquisition time in seconds (with --rate)");
  sim->add_option("--rate", sim_args.rate, "Pair rate in Hz (with --duration)");
  sim->add_option("--seed", sim_args.seed);
  sim->add_option("--variance", sim_args.variance)->check(CLI::IsMember({"n", "n-1"}));
  sim->add_option("--repeat", sim_args.repeat, "Independent repetitions (seed advances by 1)");
  sim->add_option("--format", sim_args.format)->check(CLI::IsMember({"json", "csv"}));
  sim->add_option("--out", sim_args.out);

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate the inequality across separations");
  sweep->add_option("--models", sweep_args.models, "Comma list: qm, coupling names, JSON files")
      ->delimiter(',');
  sweep->add_option("--alpha", sweep_args.alpha_spec);
  sweep->add_option("--planes", sweep_args.planes, "Two planes, e.g. xy,xz or custom:nx/ny/nz;yz");
  sweep->add_option("--method", sweep_args.method)
      ->check(CLI::IsMember({"quadrature", "closed-form", "mc"}));
  sweep->add_option("--nodes", sweep_args.nodes, "Rotation-average nodes");
  sweep->add_option("--samples", sweep_args.samples, "Events per correlation (mc method)");
  sweep->add_option("--seed", sweep_args.seed);
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (mc method, same output)");
  sweep->add_flag("--allow-non-orthogonal", sweep_args.allow_non_orthogonal,
                  "Evaluate outside the orthogonal-plane hypothesis");
  sweep->add_option("--out", sweep_args.out, "CSV path, - for stdout");
  sweep->add_option("--svg", sweep_args.svg_out, "Optional SVG chart path");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Run the full consistency battery");
  verify->add_option("--seed", verify_args.seed);
  verify->add_option("--samples", verify_args.samples, "Events per Monte Carlo estimate");
  verify->add_option("--nodes", verify_args.nodes);
  verify->add_option("--grid", verify_args.grid);
  verify->add_option("--malus-pairs", verify_args.malus_pairs);
  verify->add_option("--lemma-trials", verify_args.lemma_trials);
  verify->add_option("--sphere-samples", verify_args.sphere_samples);
  verify->add_option("--inject-bias", verify_args.inject_bias,
                     "Self test: corrupt Alice's outcomes with this probability");
  verify->add_option("--format", verify_args.format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", verify_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bound->parsed()) return cmd_bound(bound_args);
    if (power->parsed()) return cmd_power(power_args);
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (verify->parsed()) return cmd_verify(verify_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
