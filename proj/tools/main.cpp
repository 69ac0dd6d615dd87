#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "picardnet/compiler.hpp"
#include "picardnet/errors.hpp"
#include "picardnet/experiments.hpp"
#include "picardnet/mlp.hpp"
#include "picardnet/network.hpp"
#include "picardnet/problems.hpp"
#include "picardnet/random_field.hpp"

namespace {

using namespace picardnet;

struct Options {
  std::string problem = "transport";
  int d = 2;
  int n = 2;
  int m = 2;
  double t = 0.0;
  double T = 1.0;
  double eps = 0.1;
  uint64_t seed = 42;
  int samples = 256;
  std::string out;
  int64_t max_params = 10000000;
  std::string config_path;
  // Settable through the config file only.
  std::vector<double> x;
  double max_evals = 1e8;
  std::vector<int> levels = {1, 2, 3, 4, 5};
  std::vector<int> d_values = {1, 2, 4, 8};
  std::vector<double> eps_values = {0.2, 0.1, 0.05};
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long long parse_ll(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long out = std::stoll(v, &pos);
    if (pos != v.size()) throw ParseError("");
    return out;
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' needs an integer, got '" + v + "'");
  }
}

double parse_d(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw ParseError("");
    return out;
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' needs a number, got '" + v + "'");
  }
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

std::vector<double> parse_dlist(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& p : split_commas(v)) out.push_back(parse_d(key, p));
  return out;
}

std::vector<int> parse_ilist(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& p : split_commas(v)) out.push_back(static_cast<int>(parse_ll(key, p)));
  return out;
}

// key=value lines, '#' comments. Values override the command line.
void apply_config_file(Options& o) {
  std::ifstream in(o.config_path);
  if (!in) throw ParseError("config: cannot open '" + o.config_path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key == "problem") {
      o.problem = val;
    } else if (key == "d") {
      o.d = static_cast<int>(parse_ll(key, val));
    } else if (key == "n") {
      o.n = static_cast<int>(parse_ll(key, val));
    } else if (key == "m") {
      o.m = static_cast<int>(parse_ll(key, val));
    } else if (key == "t") {
      o.t = parse_d(key, val);
    } else if (key == "T") {
      o.T = parse_d(key, val);
    } else if (key == "eps") {
      o.eps = parse_d(key, val);
    } else if (key == "seed") {
      o.seed = static_cast<uint64_t>(parse_ll(key, val));
    } else if (key == "samples") {
      o.samples = static_cast<int>(parse_ll(key, val));
    } else if (key == "out") {
      o.out = val;
    } else if (key == "max-params") {
      o.max_params = parse_ll(key, val);
    } else if (key == "x") {
      o.x = parse_dlist(key, val);
    } else if (key == "max-evals") {
      o.max_evals = parse_d(key, val);
    } else if (key == "levels") {
      o.levels = parse_ilist(key, val);
    } else if (key == "d-values") {
      o.d_values = parse_ilist(key, val);
    } else if (key == "eps-values") {
      o.eps_values = parse_dlist(key, val);
    } else {
      throw ParseError("config: unknown key '" + key + "'");
    }
  }
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    write_text_file(out_path, content);
  }
}

std::string json_vector(const Vector& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s + "]";
}

MlpConfig mlp_config(const Options& o) {
  MlpConfig mc;
  mc.n = o.n;
  mc.m = o.m;
  mc.t = o.t;
  mc.seed = o.seed;
  mc.max_evals = o.max_evals;
  return mc;
}

ExperimentConfig experiment_config(const Options& o) {
  ExperimentConfig ec;
  ec.problem = o.problem;
  ec.d = o.d;
  ec.T = o.T;
  ec.t = o.t;
  ec.eps = o.eps;
  ec.levels = o.levels;
  ec.d_values = o.d_values;
  ec.eps_values = o.eps_values;
  ec.seed = o.seed;
  ec.n_points = o.samples;
  ec.max_evals = o.max_evals;
  ec.max_params = o.max_params;
  ec.out = o.out;
  return ec;
}

Vector solve_point(const Options& o) {
  if (o.x.empty()) return Vector(static_cast<size_t>(o.d), 0.0);
  if (static_cast<int>(o.x.size()) != o.d)
    throw ArgumentError("x has " + std::to_string(o.x.size()) + " entries for d=" +
                        std::to_string(o.d));
  return o.x;
}

int cmd_solve(const Options& o) {
  const Problem p = make_named_problem(o.problem, o.d, o.T, o.eps);
  const Vector x = solve_point(o);
  const MlpEstimate est = mlp_estimate(p, mlp_config(o), x);
  std::string js = "{\"problem\":\"" + p.name + "\",\"d\":" + std::to_string(o.d) +
                   ",\"n\":" + std::to_string(o.n) + ",\"m\":" + std::to_string(o.m) +
                   ",\"t\":" + format_double(o.t) + ",\"seed\":" + std::to_string(o.seed) +
                   ",\"x\":" + json_vector(x) + ",\"value\":" + format_double(est.value()) +
                   ",\"gradient\":" +
                   json_vector(Vector(est.components.begin() + 1, est.components.end()));
  if (p.exact.has_value()) {
    const MlpEstimate ref = reference_solution(p, o.t, x);
    double dev = 0.0;
    for (size_t i = 0; i < ref.components.size(); ++i)
      dev = std::max(dev, std::fabs(est.components[i] - ref.components[i]));
    js += ",\"reference_value\":" + format_double(ref.value()) + ",\"reference_gradient\":" +
          json_vector(Vector(ref.components.begin() + 1, ref.components.end())) +
          ",\"max_abs_deviation\":" + format_double(dev);
  }
  js += "}\n";
  emit(js, o.out);
  return 0;
}

int cmd_compile(const Options& o) {
  const Problem p = make_named_problem(o.problem, o.d, o.T, o.eps);
  const RandomRealization omega(o.seed);
  const Network net = compile_mlp(p, mlp_config(o), omega, o.max_params);
  emit(encode(net) + "\n", o.out);
  return 0;
}

std::vector<Vector> unit_cube_grid(uint64_t seed, int d, int count) {
  std::vector<Vector> grid;
  grid.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    const std::vector<int64_t> path = {102, j};
    const RandomStream s = derive_stream(seed, path);
    Vector x(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) x[static_cast<size_t>(i)] = s.uniform_at(static_cast<uint64_t>(i));
    grid.push_back(std::move(x));
  }
  return grid;
}

int cmd_verify(const Options& o) {
  const Problem p = make_named_problem(o.problem, o.d, o.T, o.eps);
  const MlpConfig mc = mlp_config(o);
  const RandomRealization omega(o.seed);
  const Network net = compile_mlp(p, mc, omega, o.max_params);
  const CompileReport rep =
      verify_equivalence(net, p, mc, omega, unit_cube_grid(o.seed, o.d, o.samples), 1e-8);
  emit(report_json(rep) + "\n", o.out);
  return rep.passed ? 0 : 4;
}

int cmd_table(const Options& o, ExperimentResult (*run)(const ExperimentConfig&)) {
  const ExperimentResult res = run(experiment_config(o));
  emit(to_csv(res.table), o.out);
  if (!o.out.empty()) {
    const std::string svg = render_svg_chart(res);
    if (!svg.empty()) write_text_file(sibling_svg_path(o.out), svg);
  }
  return 0;
}

int cmd_check_conditions(const Options& o) {
  const Problem p = make_named_problem(o.problem, o.d, o.T, o.eps);
  const double q = 1.5, beta = 2.0;
  const std::optional<double> c = smallest_passing_c(p, q, beta, o.samples, o.seed);
  const ConditionReport rep = check_theorem_conditions(p, c.value_or(16.0), q, beta, o.samples,
                                                       o.seed);
  std::string js = "{\"problem\":\"" + p.name + "\",\"q\":" + format_double(q) +
                   ",\"beta\":" + format_double(beta) +
                   ",\"c_found\":" + (c.has_value() ? "true" : "false") +
                   ",\"c\":" + format_double(c.value_or(16.0)) + ",\"checks\":[";
  for (size_t i = 0; i < rep.checks.size(); ++i) {
    const ConditionCheck& ck = rep.checks[i];
    if (i) js += ",";
    js += "{\"name\":\"" + ck.name + "\",\"max_ratio\":" + format_double(ck.max_ratio) +
          ",\"applicable\":" + (ck.applicable ? "true" : "false") +
          ",\"ok\":" + (ck.ok ? "true" : "false") + "}";
  }
  js += "],\"all_ok\":" + std::string(rep.all_ok ? "true" : "false") + "}\n";
  emit(js, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"multilevel Picard estimator and ReLU network compiler"};
  app.require_subcommand(1);

  Options o;
  auto add_common = [&o](CLI::App* sc) {
    sc->add_option("--problem", o.problem, "transport, linear-affine, linear-quadratic, or sine");
    sc->add_option("--d", o.d, "space dimension");
    sc->add_option("--n", o.n, "number of levels");
    sc->add_option("--m", o.m, "branching base");
    sc->add_option("--t", o.t, "evaluation time");
    sc->add_option("--T", o.T, "terminal time");
    sc->add_option("--eps", o.eps, "inner accuracy of the sine networks");
    sc->add_option("--seed", o.seed, "randomness seed");
    sc->add_option("--samples", o.samples, "evaluation point count");
    sc->add_option("--out", o.out, "output file (default stdout)");
    sc->add_option("--max-params", o.max_params, "compiled parameter cap");
    sc->add_option("--config", o.config_path, "key=value file overriding flags");
  };
  CLI::App* solve = app.add_subcommand("solve", "single value and gradient estimate");
  CLI::App* compile = app.add_subcommand("compile", "emit the unrolled network as JSON");
  CLI::App* verify = app.add_subcommand("verify", "compare compiled network vs estimator");
  CLI::App* convergence = app.add_subcommand("convergence", "error vs level table");
  CLI::App* scaling = app.add_subcommand("scaling", "parameter count scaling table");
  CLI::App* perturb = app.add_subcommand("perturb", "inner accuracy perturbation table");
  CLI::App* conditions = app.add_subcommand("check-conditions", "well-posedness audit");
  for (CLI::App* sc : {solve, compile, verify, convergence, scaling, perturb, conditions})
    add_common(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int rc = 0;
  try {
    if (!o.config_path.empty()) apply_config_file(o);
    if (solve->parsed()) rc = cmd_solve(o);
    if (compile->parsed()) rc = cmd_compile(o);
    if (verify->parsed()) rc = cmd_verify(o);
    if (convergence->parsed()) rc = cmd_table(o, run_convergence);
    if (scaling->parsed()) rc = cmd_table(o, run_scaling);
    if (perturb->parsed()) rc = cmd_table(o, run_perturbation);
    if (conditions->parsed()) rc = cmd_check_conditions(o);
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  const auto elapsed = std::chrono::steady_clock::now() - started;
  std::fprintf(stderr, "wall_time_ms=%lld\n",
               static_cast<long long>(
                   std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()));
  return rc;
}
