#include "picardnet/compiler.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "picardnet/errors.hpp"

namespace picardnet {

namespace {

int64_t ipow64(int64_t base, int exp) {
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_level_args(int n, int m) {
  if (n < 0) throw ArgumentError("compile: level must be nonnegative");
  if (m < 1) throw ArgumentError("compile: branching base must be positive");
  if (n > 0 && std::pow(static_cast<double>(m), n) > 1e9)
    throw ResourceError("compile: m^n too large");
}

LayerDims zero_level_dims(int d, int len_g) {
  std::vector<int> w(static_cast<size_t>(len_g), 1);
  w.front() = d;
  w.back() = d + 1;
  return LayerDims(std::move(w));
}

}  // namespace

int predicted_depth(int n, const LayerDims& dims_f, const LayerDims& dims_g) {
  if (n < 0) throw ArgumentError("predicted_depth: level must be nonnegative");
  return n * (dims_f.size() - 1) + dims_g.size();
}

int64_t width_bound(int n, int m, int c) {
  if (n < 0 || m < 1 || c < 1) throw ArgumentError("width_bound: bad arguments");
  if (n * std::log(4.0 * m) + std::log(static_cast<double>(c)) > 42.0 * std::log(2.0))
    throw ResourceError("width_bound: overflow");
  return c * ipow64(4 * m, n);
}

int width_constant(const Problem& p) {
  if (!p.phi_f.has_value() || !p.phi_g.has_value())
    throw CapabilityError("width_constant: problem has no network form of f and g");
  int c = p.d + 1;
  c = std::max(c, dims(*p.phi_f).max_width());
  c = std::max(c, dims(*p.phi_g).max_width());
  return c;
}

LayerDims compiled_dims(int n, int m, const LayerDims& dims_f, const LayerDims& dims_g) {
  check_level_args(n, m);
  if (dims_f.input() != dims_g.input() + 1)
    throw ShapeError("compiled_dims: f must take one more input than g");
  if (dims_f.output() != 1 || dims_g.output() != 1)
    throw ShapeError("compiled_dims: f and g must have scalar output");
  const int d = dims_g.input();
  if (n == 0) return zero_level_dims(d, dims_g.size());

  const int lf = dims_f.size();
  const int target = n * (lf - 1) + dims_g.size();
  std::vector<int64_t> interior(static_cast<size_t>(target) - 2, 0);
  auto add = [&interior, target](const LayerDims& dd, int64_t mult) {
    if (dd.size() != target) throw ShapeError("compiled_dims: family depth mismatch");
    for (int i = 1; i + 1 < dd.size(); ++i) interior[static_cast<size_t>(i) - 1] += mult * dd[i];
  };

  const LayerDims terminal =
      retarget_dims(compose_dims(identity_dims(n * (lf - 1) + 1), dims_g), d + 1);
  add(terminal, 2 * ipow64(m, n));

  for (int level = 0; level < n; ++level) {
    const LayerDims sub = compiled_dims(level, m, dims_f, dims_g);
    LayerDims comp = compose_dims(dims_f, sub);
    if (level < n - 1)
      comp = compose_dims(identity_dims((n - 1 - level) * (lf - 1) + 1), comp);
    add(retarget_dims(comp, d + 1), ipow64(m, n - level));
    if (level >= 1) {
      const LayerDims sub2 = compiled_dims(level - 1, m, dims_f, dims_g);
      LayerDims comp2 = compose_dims(dims_f, sub2);
      comp2 = compose_dims(identity_dims((n - level) * (lf - 1) + 1), comp2);
      add(retarget_dims(comp2, d + 1), ipow64(m, n - level));
    }
  }

  std::vector<int> w(static_cast<size_t>(target), 0);
  w.front() = d;
  w.back() = d + 1;
  for (int i = 1; i + 1 < target; ++i) {
    const int64_t v = interior[static_cast<size_t>(i) - 1];
    if (v > 100000000) throw ResourceError("compiled_dims: width exceeds any sane budget");
    w[static_cast<size_t>(i)] = static_cast<int>(v);
  }
  return LayerDims(std::move(w));
}

namespace {

struct CompileCtx {
  const Problem& p;
  const Network& phi_f;
  const Network& phi_g;
  const RandomRealization& omega;
  int m;
  int len_f;
  int len_g;
};

Network zero_level_network(int d, int len_g) {
  std::vector<Layer> layers;
  layers.push_back({Matrix(1, d), Vector(1, 0.0)});
  for (int i = 0; i < len_g - 3; ++i) layers.push_back({Matrix(1, 1), Vector(1, 0.0)});
  layers.push_back({Matrix(d + 1, 1), Vector(static_cast<size_t>(d) + 1, 0.0)});
  return Network(std::move(layers));
}

// Mirrors the estimator recursion: same theta children, same draws, one
// summand per sampled term, coefficients folded into the output layers.
Network compile_level(CompileCtx& ctx, int n, double t, std::vector<int64_t>& path) {
  const int d = ctx.p.d;
  if (n <= 0) return zero_level_network(d, ctx.len_g);
  const double T = ctx.p.T;
  const int target = n * (ctx.len_f - 1) + ctx.len_g;

  std::vector<Network> nets;
  const int64_t mn = ipow64(ctx.m, n);
  const Network padded_g = extend_depth(ctx.phi_g, target);
  const double horizon = T - t;

  std::vector<Vector> dws;
  dws.reserve(static_cast<size_t>(mn));
  for (int64_t i = 1; i <= mn; ++i) {
    path.push_back(0);
    path.push_back(-i);
    dws.push_back(ctx.omega.brownian_increment(path, d, t, T));
    path.pop_back();
    path.pop_back();
  }
  Vector lam(static_cast<size_t>(d) + 1, 0.0);
  for (const Vector& dw : dws) {
    lam[0] = 1.0 / static_cast<double>(mn);
    for (int j = 0; j < d; ++j)
      lam[static_cast<size_t>(j) + 1] = dw[static_cast<size_t>(j)] / horizon / static_cast<double>(mn);
    nets.push_back(vector_scale(padded_g, lam, dw, 0.0));
  }
  const Vector no_shift(static_cast<size_t>(d), 0.0);
  for (const Vector& dw : dws) {
    lam[0] = 0.0;
    for (int j = 0; j < d; ++j)
      lam[static_cast<size_t>(j) + 1] = -(dw[static_cast<size_t>(j)] / horizon / static_cast<double>(mn));
    nets.push_back(vector_scale(padded_g, lam, no_shift, 0.0));
  }

  for (int level = 0; level < n; ++level) {
    const int64_t count = ipow64(ctx.m, n - level);
    for (int64_t i = 1; i <= count; ++i) {
      path.push_back(level);
      path.push_back(i);
      const LevelDraw draw = sample_level_draw(ctx.omega, path, d, t, T);
      const Network sub = compile_level(ctx, level, draw.time, path);
      path.pop_back();
      path.pop_back();
      const Network comp = extend_depth(compose_networks(ctx.phi_f, sub), target);
      const double w = draw.inv_rho / static_cast<double>(count);
      lam[0] = w;
      for (int j = 0; j < d; ++j)
        lam[static_cast<size_t>(j) + 1] = draw.dw[static_cast<size_t>(j)] / draw.dt * w;
      nets.push_back(vector_scale(comp, lam, draw.dw, 0.0));
      if (level >= 1) {
        path.push_back(-level);
        path.push_back(i);
        const Network sub2 = compile_level(ctx, level - 1, draw.time, path);
        path.pop_back();
        path.pop_back();
        const Network comp2 = extend_depth(compose_networks(ctx.phi_f, sub2), target);
        for (double& e : lam) e = -e;
        nets.push_back(vector_scale(comp2, lam, draw.dw, 0.0));
      }
    }
  }
  return sum_networks(nets, std::vector<double>(nets.size(), 1.0));
}

}  // namespace

Network compile_mlp(const Problem& p, const MlpConfig& cfg, const RandomRealization& omega,
                    int64_t max_params) {
  if (!p.phi_f.has_value() || !p.phi_g.has_value())
    throw CapabilityError("compile_mlp: problem '" + p.name + "' has no network form of f and g");
  const Network& phi_f = *p.phi_f;
  const Network& phi_g = *p.phi_g;
  if (phi_f.input_width() != p.d + 1 || phi_f.output_width() != 1)
    throw ShapeError("compile_mlp: f network must map R^(d+1) to R");
  if (phi_g.input_width() != p.d || phi_g.output_width() != 1)
    throw ShapeError("compile_mlp: g network must map R^d to R");
  check_level_args(cfg.n, cfg.m);
  if (!(cfg.t >= 0.0) || !(cfg.t < p.T - 1e-12 * p.T))
    throw ArgumentError("compile_mlp: time must lie in [0, T)");
  if (cfg.theta_root.empty()) throw ArgumentError("compile_mlp: empty theta root");

  const LayerDims target_dims = compiled_dims(cfg.n, cfg.m, dims(phi_f), dims(phi_g));
  if (param_count(target_dims) > max_params)
    throw ResourceError("compile_mlp: " + std::to_string(param_count(target_dims)) +
                        " parameters exceed the cap of " + std::to_string(max_params));

  CompileCtx ctx{p, phi_f, phi_g, omega, cfg.m, dims(phi_f).size(), dims(phi_g).size()};
  std::vector<int64_t> path = cfg.theta_root;
  Network net = compile_level(ctx, cfg.n, cfg.t, path);
  if (!(dims(net) == target_dims))
    throw ShapeError("compile_mlp: construction does not match its dimension arithmetic");
  return net;
}

CompileReport verify_equivalence(const Network& net, const Problem& p, const MlpConfig& cfg,
                                 const RandomRealization& omega,
                                 const std::vector<Vector>& grid, double tolerance) {
  if (!p.phi_f.has_value() || !p.phi_g.has_value())
    throw CapabilityError("verify_equivalence: problem has no network form of f and g");
  CompileReport r;
  r.n = cfg.n;
  r.m = cfg.m;
  r.t = cfg.t;
  r.tolerance = tolerance;
  const LayerDims nd = dims(net);
  r.depth_predicted = predicted_depth(cfg.n, dims(*p.phi_f), dims(*p.phi_g));
  r.depth_actual = nd.size();
  r.width_constant = picardnet::width_constant(p);
  r.width_bound_value = width_bound(cfg.n, cfg.m, r.width_constant);
  r.width_actual = nd.max_width();
  r.params = param_count(net);
  r.depth_ok = r.depth_actual == r.depth_predicted;
  r.width_ok = r.width_actual <= r.width_bound_value;
  const double envelope = 2.0 * r.depth_actual * static_cast<double>(r.width_bound_value) *
                          static_cast<double>(r.width_bound_value);
  r.param_envelope_ok = static_cast<double>(r.params) <= envelope;

  for (const Vector& x : grid) {
    const Vector a = realize(net, x);
    const Vector b = mlp_estimate(p, cfg, x, omega).components;
    for (size_t i = 0; i < b.size(); ++i) {
      const double abs_dev = std::fabs(a[i] - b[i]);
      const double rel_dev = abs_dev / std::max(1.0, std::fabs(b[i]));
      r.max_abs_deviation = std::max(r.max_abs_deviation, abs_dev);
      r.max_rel_deviation = std::max(r.max_rel_deviation, rel_dev);
    }
  }
  r.deviation_ok = r.max_rel_deviation <= tolerance;
  r.passed = r.depth_ok && r.width_ok && r.param_envelope_ok && r.deviation_ok;
  return r;
}

std::string report_json(const CompileReport& r) {
  char buf[640];
  std::snprintf(buf, sizeof(buf),
                "{\"n\":%d,\"m\":%d,\"t\":%.17g,"
                "\"depth_predicted\":%d,\"depth_actual\":%d,"
                "\"width_constant\":%d,\"width_bound\":%lld,\"width_actual\":%d,"
                "\"params\":%lld,"
                "\"max_abs_deviation\":%.17g,\"max_rel_deviation\":%.17g,"
                "\"tolerance\":%.17g,"
                "\"depth_ok\":%s,\"width_ok\":%s,\"param_envelope_ok\":%s,"
                "\"deviation_ok\":%s,\"passed\":%s}",
                r.n, r.m, r.t, r.depth_predicted, r.depth_actual, r.width_constant,
                static_cast<long long>(r.width_bound_value), r.width_actual,
                static_cast<long long>(r.params), r.max_abs_deviation, r.max_rel_deviation,
                r.tolerance, r.depth_ok ? "true" : "false", r.width_ok ? "true" : "false",
                r.param_envelope_ok ? "true" : "false", r.deviation_ok ? "true" : "false",
                r.passed ? "true" : "false");
  return buf;
}

}  // namespace picardnet
