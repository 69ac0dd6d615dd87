#include "picardnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>

#include "picardnet/compiler.hpp"
#include "picardnet/errors.hpp"

#ifndef PICARDNET_BUILD_STAMP
#define PICARDNET_BUILD_STAMP "unversioned"
#endif

namespace picardnet {

namespace {

// Per-point stream tag. Any value outside the estimator's level range keeps
// the point streams disjoint from the internal grid streams.
constexpr int64_t kPointTag = 101;

std::string fmt(double v) { return format_double(v); }

std::string fmt_int(int64_t v) { return std::to_string(v); }

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ArgumentError("slope fit: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

double sup_gamma_error(const SineApproximant& g) {
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -4.0 + 8.0 * i / 4000.0;
    worst = std::max(worst, std::fabs(std::sin(x) - g.eval(x)));
  }
  return worst;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw ShapeError("csv: ragged row");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::string s = "problem=" + cfg.problem + ";d=" + fmt_int(cfg.d) + ";T=" + fmt(cfg.T) +
                  ";t=" + fmt(cfg.t) + ";eps=" + fmt(cfg.eps) + ";levels=";
  for (int n : cfg.levels) s += fmt_int(n) + ",";
  s += ";d_values=";
  for (int d : cfg.d_values) s += fmt_int(d) + ",";
  s += ";eps_values=";
  for (double e : cfg.eps_values) s += fmt(e) + ",";
  s += ";seed=" + std::to_string(cfg.seed) + ";n_points=" + fmt_int(cfg.n_points) +
       ";max_evals=" + fmt(cfg.max_evals) + ";max_params=" + fmt_int(cfg.max_params);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

std::string build_stamp() { return PICARDNET_BUILD_STAMP; }

std::string sibling_svg_path(const std::string& csv_path) {
  if (csv_path.size() >= 4 && csv_path.compare(csv_path.size() - 4, 4, ".csv") == 0)
    return csv_path.substr(0, csv_path.size() - 4) + ".svg";
  return csv_path + ".svg";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ResourceError("write to '" + path + "' failed");
}

Problem make_named_problem(const std::string& name, int d, double T, double eps) {
  if (name == "transport") return make_transport_problem(d, T);
  if (name == "linear-affine") return make_linear_heat_problem(d, T, LinearHeatVariant::kAffine);
  if (name == "linear-quadratic")
    return make_linear_heat_problem(d, T, LinearHeatVariant::kQuadratic);
  if (name == "sine") return make_sine_problem(d, T, eps);
  throw ArgumentError("unknown problem '" + name +
                      "' (expected transport, linear-affine, linear-quadratic, or sine)");
}

ExperimentResult run_convergence(const ExperimentConfig& cfg) {
  const Problem p = make_named_problem(cfg.problem, cfg.d, cfg.T, cfg.eps);
  if (cfg.levels.empty()) throw ArgumentError("convergence: empty level sweep");
  std::function<Vector(double, const Vector&)> reference;
  if (p.exact.has_value()) {
    reference = *p.exact;
  } else {
    // No closed form: freeze one high-level run on a disjoint stream as the
    // oracle field. Costs m^(2n) = 6^12 draws, so the budget needs raising.
    MlpConfig oracle;
    oracle.n = 6;
    oracle.m = 6;
    oracle.t = cfg.t;
    oracle.seed = cfg.seed;
    oracle.theta_root = {1};
    oracle.max_evals = cfg.max_evals;
    reference = [&p, oracle](double, const Vector& x) {
      return mlp_estimate(p, oracle, x).components;
    };
  }
  const std::string hash = config_hash(cfg);
  const std::string build = build_stamp();

  ExperimentResult r;
  r.table.columns = {"problem", "d",       "n",           "m",    "t",    "points",
                     "error",   "std_err", "config_hash", "seed", "build"};
  Series s{"weighted L2 error", {}};
  for (int n : cfg.levels) {
    MlpConfig mc;
    mc.n = n;
    mc.m = std::max(n, 1);
    mc.t = cfg.t;
    mc.seed = cfg.seed;
    mc.max_evals = cfg.max_evals;
    const ErrorStats es = weighted_l2_error(p, mc, reference, cfg.n_points);
    r.table.rows.push_back({p.name, fmt_int(cfg.d), fmt_int(n), fmt_int(mc.m), fmt(cfg.t),
                            fmt_int(cfg.n_points), fmt(es.error), fmt(es.std_err), hash,
                            std::to_string(cfg.seed), build});
    if (es.error > 0.0) s.points.emplace_back(static_cast<double>(n), es.error);
  }
  r.chart.push_back(std::move(s));
  r.chart_title = p.name + " error vs level";
  r.chart_xlabel = "n = m";
  r.chart_ylabel = "weighted L2 error";
  r.logy = true;
  return r;
}

ExperimentResult run_scaling(const ExperimentConfig& cfg) {
  if (cfg.problem != "sine")
    throw ArgumentError("scaling: the parameter sweep is defined for the sine problem");
  if (cfg.d_values.empty() || cfg.eps_values.empty())
    throw ArgumentError("scaling: empty sweep list");
  const std::string hash = config_hash(cfg);
  const std::string build = build_stamp();

  ExperimentResult r;
  r.table.columns = {"kind",  "label",    "d",     "n",           "m",    "eps",
                     "params", "depth",   "width", "kappa",       "envelope",
                     "slope",  "config_hash", "seed", "build"};

  // The construction's own kappa: smallest constant with the swept
  // approximant widths below kappa * eps^-3, floored at one.
  double kappa = 1.0;
  for (double e : cfg.eps_values) {
    const SineApproximant g = sin_approx_network(e);
    kappa = std::max(kappa, dims(g.network).max_width() * std::pow(e, 3.0));
  }

  Series compiled{"compiled network", {}};
  for (int d : cfg.d_values) {
    const Problem p = make_named_problem("sine", d, cfg.T, cfg.eps);
    MlpConfig mc;
    mc.n = 2;
    mc.m = 2;
    mc.t = cfg.t;
    mc.seed = cfg.seed;
    mc.max_evals = cfg.max_evals;
    Network net = [&] {
      try {
        return compile_mlp(p, mc, RandomRealization(cfg.seed), cfg.max_params);
      } catch (const ResourceError& e) {
        throw ResourceError("scaling: sweep point d=" + fmt_int(d) + " eps=" + fmt(cfg.eps) +
                            ": " + e.what());
      }
    }();
    const LayerDims dd = dims(net);
    const int64_t params = param_count(net);
    r.table.rows.push_back({"compiled", "", fmt_int(d), "2", "2", fmt(cfg.eps),
                            fmt_int(params), fmt_int(dd.size()), fmt_int(dd.max_width()), "",
                            "", "", hash, std::to_string(cfg.seed), build});
    compiled.points.emplace_back(static_cast<double>(d), static_cast<double>(params));
  }

  Series f_by_d{"nonlinearity network", {}};
  std::vector<std::pair<double, double>> f_by_inv_eps;
  for (int d : cfg.d_values) {
    const Problem p = make_named_problem("sine", d, cfg.T, cfg.eps);
    f_by_d.points.emplace_back(static_cast<double>(d),
                               static_cast<double>(param_count(*p.phi_f)));
  }
  for (double e : cfg.eps_values) {
    const Problem p = make_named_problem("sine", cfg.d, cfg.T, e);
    f_by_inv_eps.emplace_back(1.0 / e, static_cast<double>(param_count(*p.phi_f)));
  }
  for (int d : cfg.d_values) {
    for (double e : cfg.eps_values) {
      const Problem p = make_named_problem("sine", d, cfg.T, e);
      const LayerDims fd = dims(*p.phi_f);
      const double envelope = 640.0 * kappa * kappa * d * d * std::pow(e, -6.0);
      r.table.rows.push_back({"f-net", "", fmt_int(d), "", "", fmt(e),
                              fmt_int(param_count(*p.phi_f)), fmt_int(fd.size()),
                              fmt_int(fd.max_width()), fmt(kappa), fmt(envelope), "", hash,
                              std::to_string(cfg.seed), build});
    }
  }

  auto slope_row = [&](const std::string& label, int d, double eps,
                       const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) return;
    r.table.rows.push_back({"slope", label, d > 0 ? fmt_int(d) : "", "", "",
                            eps > 0 ? fmt(eps) : "", "", "", "", "", "",
                            fmt(fit_loglog_slope(pts)), hash, std::to_string(cfg.seed), build});
  };
  slope_row("compiled-vs-d", 0, cfg.eps, compiled.points);
  slope_row("f-vs-d", 0, cfg.eps, f_by_d.points);
  slope_row("f-vs-inv-eps", cfg.d, 0, f_by_inv_eps);

  r.chart.push_back(std::move(compiled));
  r.chart.push_back(std::move(f_by_d));
  r.chart_title = "sine parameter scaling";
  r.chart_xlabel = "d";
  r.chart_ylabel = "parameters";
  r.logx = true;
  r.logy = true;
  return r;
}

ExperimentResult run_perturbation(const ExperimentConfig& cfg) {
  if (cfg.problem != "sine")
    throw ArgumentError("perturb: the accuracy study is defined for the sine problem");
  if (cfg.eps_values.empty()) throw ArgumentError("perturb: empty accuracy list");
  const std::string hash = config_hash(cfg);
  const std::string build = build_stamp();
  const int level = 3;

  ExperimentResult r;
  r.table.columns = {"kind",           "d",    "n",           "m",
                     "eps1",           "eps2", "distance",    "std_err",
                     "gamma_err_sum",  "ratio", "config_hash", "seed",
                     "build"};

  auto make_field = [&cfg, level](const Problem& p) {
    return PointField([&p, &cfg, level](int j, const Vector& x) {
      MlpConfig mc;
      mc.n = level;
      mc.m = level;
      mc.t = cfg.t;
      mc.seed = cfg.seed;
      mc.max_evals = cfg.max_evals;
      mc.theta_root = {0, kPointTag, j};
      return mlp_estimate(p, mc, x).components;
    });
  };
  const std::vector<int64_t> grid_root = {0};
  const double weight_time = cfg.T - cfg.t;

  Series dev{"deviation", {}};
  std::vector<double> distances;
  for (double eps : cfg.eps_values) {
    const Problem a = make_named_problem("sine", cfg.d, cfg.T, eps);
    const Problem a_again = make_named_problem("sine", cfg.d, cfg.T, eps);
    const Problem b = make_named_problem("sine", cfg.d, cfg.T, eps / 2);
    const ErrorStats control = weighted_l2_distance(make_field(a), make_field(a_again), cfg.d,
                                                    weight_time, cfg.n_points, cfg.seed,
                                                    grid_root);
    const ErrorStats dist = weighted_l2_distance(make_field(a), make_field(b), cfg.d,
                                                 weight_time, cfg.n_points, cfg.seed, grid_root);
    const double gamma_sum =
        sup_gamma_error(sin_approx_network(eps)) + sup_gamma_error(sin_approx_network(eps / 2));
    r.table.rows.push_back({"control", fmt_int(cfg.d), fmt_int(level), fmt_int(level), fmt(eps),
                            fmt(eps), fmt(control.error), fmt(control.std_err), "", "", hash,
                            std::to_string(cfg.seed), build});
    r.table.rows.push_back({"pair", fmt_int(cfg.d), fmt_int(level), fmt_int(level), fmt(eps),
                            fmt(eps / 2), fmt(dist.error), fmt(dist.std_err), fmt(gamma_sum),
                            "", hash, std::to_string(cfg.seed), build});
    distances.push_back(dist.error);
    if (dist.error > 0.0) dev.points.emplace_back(eps, dist.error);
  }
  for (size_t i = 0; i + 1 < cfg.eps_values.size(); ++i) {
    const double ratio = distances[i + 1] > 0.0 ? distances[i] / distances[i + 1] : 0.0;
    r.table.rows.push_back({"ratio", fmt_int(cfg.d), fmt_int(level), fmt_int(level),
                            fmt(cfg.eps_values[i]), fmt(cfg.eps_values[i + 1]), "", "", "",
                            fmt(ratio), hash, std::to_string(cfg.seed), build});
  }

  r.chart.push_back(std::move(dev));
  r.chart_title = "sine accuracy perturbation";
  r.chart_xlabel = "eps";
  r.chart_ylabel = "weighted L2 deviation";
  r.logx = true;
  r.logy = true;
  return r;
}

Calibration calibrate_error_model(const std::vector<std::pair<int, double>>& observed,
                                  double c_hat, double kappa_hat, double q, double T) {
  if (observed.size() < 2)
    throw ArgumentError("calibrate: need at least two (level, error) observations");
  if (!(c_hat > 0.0) || !(kappa_hat > 0.0))
    throw ArgumentError("calibrate: constants must be positive");
  if (!(q > 0.0) || !(q < 2.0)) throw ArgumentError("calibrate: q must lie in (0, 2)");
  if (!(T > 0.0)) throw ArgumentError("calibrate: horizon must be positive");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, err] : observed) {
    if (n < 1) throw ArgumentError("calibrate: levels must be at least one");
    if (!(err > 0.0)) throw ArgumentError("calibrate: errors must be positive");
    const double x = static_cast<double>(n);
    const double y = std::log(err) + 0.5 * x * std::log(x);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(observed.size());
  const double den = count * sxx - sx * sx;
  if (den == 0.0) throw ArgumentError("calibrate: need at least two distinct levels");
  Calibration cal;
  cal.b = (count * sxy - sx * sy) / den;
  cal.a = (sy - cal.b * sx) / count;
  cal.c_hat = c_hat;
  cal.kappa_hat = kappa_hat;
  cal.q = q;
  cal.T = T;
  return cal;
}

double calibrated_error(const Calibration& cal, int n) {
  if (n < 1) throw ArgumentError("calibrated_error: level must be at least one");
  const double x = static_cast<double>(n);
  return std::exp(cal.a + cal.b * x - 0.5 * x * std::log(x));
}

double proof_error_majorant(const Calibration& cal, int d, int n) {
  if (d < 1 || n < 1) throw ArgumentError("proof_error_majorant: bad arguments");
  const double x = static_cast<double>(n);
  const double log_value = x * x * x / 6.0 - 0.5 * x * std::log(x) + x * std::log(8.0) +
                           x * cal.c_hat * cal.c_hat * cal.T + std::log(cal.kappa_hat) +
                           cal.kappa_hat * std::log(static_cast<double>(d));
  return std::exp(log_value);
}

LevelChoice choose_level(int d, double epsilon_target, const Calibration& cal, int max_level) {
  if (d < 1) throw ArgumentError("choose_level: dimension must be positive");
  if (!(epsilon_target > 0.0) || !(epsilon_target < 1.0))
    throw ArgumentError("choose_level: target must lie in (0, 1)");
  if (max_level < 2) throw ArgumentError("choose_level: level cap must be at least two");
  for (int n = 2; n <= max_level; ++n) {
    const double model = calibrated_error(cal, n);
    if (model <= epsilon_target / 2.0) {
      LevelChoice out;
      out.n = n;
      out.model_error = model;
      out.proof_error = proof_error_majorant(cal, d, n);
      const double denom = 10.0 * cal.c_hat * cal.c_hat *
                           std::pow(static_cast<double>(d), 2.0 * cal.c_hat) *
                           std::beta(1.0 - cal.q / 2.0, 0.5) * cal.kappa_hat *
                           std::pow(static_cast<double>(d), cal.kappa_hat);
      out.eps_inner = epsilon_target / denom;
      return out;
    }
  }
  throw ResourceError("choose_level: no level up to " + std::to_string(max_level) +
                      " brings the calibrated model below half the target");
}

namespace {

void svg_append(std::string& out, const char* fmt_str, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt_str);
  std::vsnprintf(buf, sizeof(buf), fmt_str, args);
  va_end(args);
  out += buf;
}

}  // namespace

std::string render_svg_chart(const ExperimentResult& r) {
  std::vector<Series> series;
  for (const Series& s : r.chart) {
    Series t{s.name, {}};
    for (auto [x, y] : s.points) {
      if (r.logx && !(x > 0.0)) continue;
      if (r.logy && !(y > 0.0)) continue;
      t.points.emplace_back(r.logx ? std::log10(x) : x, r.logy ? std::log10(y) : y);
    }
    if (!t.points.empty()) series.push_back(std::move(t));
  }
  if (series.empty()) return "";

  double xmin = series[0].points[0].first, xmax = xmin;
  double ymin = series[0].points[0].second, ymax = ymin;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (ymax == ymin) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double x0 = 70, x1 = 690, y0 = 40, y1 = 390;
  auto px = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
  auto py = [&](double y) { return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::string out;
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" "
      "viewBox=\"0 0 720 440\">\n";
  out += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  svg_append(out,
             "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"15\">%s</text>\n",
             r.chart_title.c_str());
  svg_append(out,
             "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
             "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
             x0, y1, x1, y1, x0, y0, x0, y1);
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double vx = r.logx ? std::pow(10.0, fx) : fx;
    const double vy = r.logy ? std::pow(10.0, fy) : fy;
    svg_append(out,
               "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
               "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">%.4g</text>\n",
               px(fx), y1, px(fx), y1 + 5, px(fx), y1 + 18, vx);
    svg_append(out,
               "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
               "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">%.4g</text>\n",
               x0 - 5, py(fy), x0, py(fy), x0 - 8, py(fy) + 4, vy);
  }
  svg_append(out,
             "<text x=\"%g\" y=\"425\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"12\">%s</text>\n",
             (x0 + x1) / 2, r.chart_xlabel.c_str());
  svg_append(out,
             "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"12\" transform=\"rotate(-90 16 %g)\">%s</text>\n",
             (y0 + y1) / 2, (y0 + y1) / 2, r.chart_ylabel.c_str());

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kColors[si % 4];
    std::string pts;
    for (auto [x, y] : series[si].points) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%g,%g ", px(x), py(y));
      pts += buf;
    }
    svg_append(out, "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\"/>\n",
               pts.c_str(), color);
    for (auto [x, y] : series[si].points)
      svg_append(out, "<circle cx=\"%g\" cy=\"%g\" r=\"3\" fill=\"%s\"/>\n", px(x), py(y), color);
    svg_append(out,
               "<rect x=\"%g\" y=\"%g\" width=\"12\" height=\"12\" fill=\"%s\"/>\n"
               "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
               x1 - 180.0, y0 + 10.0 + 18.0 * si, color, x1 - 162.0, y0 + 20.0 + 18.0 * si,
               series[si].name.c_str());
  }
  out += "</svg>\n";
  return out;
}

}  // namespace picardnet
