#include "picardnet/problems.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "picardnet/calculus.hpp"
#include "picardnet/errors.hpp"
#include "picardnet/random_field.hpp"

namespace picardnet {

namespace {

constexpr int64_t kConditionTag = 103;

// Ascending accumulation; matches the arithmetic of the network forms.
double scaled_sum(const Vector& w, double inv) {
  double s = 0.0;
  for (double e : w) s += e * inv;
  return s;
}

double plain_sum(const Vector& x) {
  double s = 0.0;
  for (double e : x) s += e;
  return s;
}

// Picks coordinate `index` out of k inputs, dims (k, 2, 1).
Network select_network(int k, int index) {
  Matrix w1(2, k);
  w1(0, index) = 1.0;
  w1(1, index) = -1.0;
  Matrix w2(1, 2);
  w2(0, 0) = 1.0;
  w2(0, 1) = -1.0;
  std::vector<Layer> layers;
  layers.push_back({std::move(w1), Vector(2, 0.0)});
  layers.push_back({std::move(w2), Vector(1, 0.0)});
  return Network(std::move(layers));
}

// Sum of all k inputs, dims (k, 2, 1).
Network sum_all_network(int k) {
  Matrix w1(2, k);
  for (int j = 0; j < k; ++j) {
    w1(0, j) = 1.0;
    w1(1, j) = -1.0;
  }
  Matrix w2(1, 2);
  w2(0, 0) = 1.0;
  w2(0, 1) = -1.0;
  std::vector<Layer> layers;
  layers.push_back({std::move(w1), Vector(2, 0.0)});
  layers.push_back({std::move(w2), Vector(1, 0.0)});
  return Network(std::move(layers));
}

// Constant zero with k inputs, dims (k, 1, 1).
Network zero_function_network(int k) {
  std::vector<Layer> layers;
  layers.push_back({Matrix(1, k), Vector(1, 0.0)});
  layers.push_back({Matrix(1, 1), Vector(1, 0.0)});
  return Network(std::move(layers));
}

void check_problem_args(int d, double T) {
  if (d < 1) throw ArgumentError("problem dimension must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("terminal time must be positive and finite");
}

}  // namespace

Problem make_transport_problem(int d, double T) {
  check_problem_args(d, T);
  Problem p;
  p.name = "transport";
  p.d = d;
  p.T = T;
  p.f = [](const Vector& w) { return w[1]; };
  p.g = [](const Vector& x) { return x[0]; };
  p.phi_f = select_network(d + 1, 1);
  p.phi_g = select_network(d, 0);
  p.exact = [d, T](double t, const Vector& x) {
    Vector v(static_cast<size_t>(d) + 1, 0.0);
    v[0] = x[0] + (T - t);
    v[1] = 1.0;
    return v;
  };
  p.f_target = p.f;
  p.g_target = p.g;
  p.lipschitz_weights.assign(static_cast<size_t>(d) + 1, 0.0);
  p.lipschitz_weights[1] = 1.0;
  return p;
}

Problem make_linear_heat_problem(int d, double T, LinearHeatVariant variant) {
  check_problem_args(d, T);
  Problem p;
  p.d = d;
  p.T = T;
  p.f = [](const Vector&) { return 0.0; };
  p.phi_f = zero_function_network(d + 1);
  p.lipschitz_weights.assign(static_cast<size_t>(d) + 1, 0.0);
  if (variant == LinearHeatVariant::kAffine) {
    p.name = "linear-affine";
    p.g = [](const Vector& x) { return plain_sum(x); };
    p.phi_g = sum_all_network(d);
    p.exact = [d](double, const Vector& x) {
      Vector v(static_cast<size_t>(d) + 1, 1.0);
      v[0] = plain_sum(x);
      return v;
    };
  } else {
    p.name = "linear-quadratic";
    p.g = [](const Vector& x) {
      double s = 0.0;
      for (double e : x) s += e * e;
      return s;
    };
    p.exact = [d, T](double t, const Vector& x) {
      Vector v(static_cast<size_t>(d) + 1, 0.0);
      double s = 0.0;
      for (double e : x) s += e * e;
      v[0] = s + d * (T - t);
      for (int i = 0; i < d; ++i) v[static_cast<size_t>(i) + 1] = 2.0 * x[static_cast<size_t>(i)];
      return v;
    };
  }
  p.f_target = p.f;
  p.g_target = p.g;
  return p;
}

namespace {

// Shared by SineApproximant::eval and the construction below; performs the
// same operations in the same order as realize() on the (1, K+1, 1) network.
double cumulative_eval(const Vector& neg_knots, const Vector& deltas, double bias, double x) {
  double acc = 0.0;
  for (size_t k = 0; k < deltas.size(); ++k) {
    double v = 1.0 * x;
    v += neg_knots[k];
    v = v > 0.0 ? v : 0.0;
    acc += deltas[k] * v;
  }
  return acc + bias;
}

}  // namespace

double SineApproximant::eval(double x) const {
  return cumulative_eval(neg_knots, deltas, bias, x);
}

SineApproximant sin_approx_network(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ArgumentError("sin_approx_network: accuracy must lie in (0, 1)");
  const double pi = 3.14159265358979323846;
  const double multiples = std::max(std::ceil(std::pow(epsilon, -1.0 / 1.5)), 2.0);
  const double range = pi * multiples;
  const int half = static_cast<int>(std::ceil(range / std::sqrt(8.0 * epsilon)));
  const int intervals = 2 * half;
  const double h = 2.0 * range / intervals;

  std::vector<double> knots(static_cast<size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) knots[static_cast<size_t>(k)] = (k - half) * h;

  Vector neg_knots(knots.size());
  for (size_t k = 0; k < knots.size(); ++k) neg_knots[k] = -knots[k];

  Vector deltas(knots.size(), 0.0);
  double prev_slope = 0.0;
  for (int j = 0; j < intervals; ++j) {
    const double slope = (std::sin(knots[static_cast<size_t>(j) + 1]) - std::sin(knots[static_cast<size_t>(j)])) /
                         (knots[static_cast<size_t>(j) + 1] - knots[static_cast<size_t>(j)]);
    deltas[static_cast<size_t>(j)] = slope - prev_slope;
    prev_slope = slope;
  }
  deltas.back() = -prev_slope;

  // Output bias that makes eval(0) exactly zero, absorbing the rounding of
  // the cumulative sum. Differs from sin at the left end by well under the
  // accuracy budget.
  const double bias = -cumulative_eval(neg_knots, deltas, 0.0, 0.0);

  const int width = intervals + 1;
  Matrix w1(width, 1);
  for (int k = 0; k < width; ++k) w1(k, 0) = 1.0;
  Matrix w2(1, width);
  for (int k = 0; k < width; ++k) w2(0, k) = deltas[static_cast<size_t>(k)];
  std::vector<Layer> layers;
  layers.push_back({std::move(w1), neg_knots});
  layers.push_back({std::move(w2), Vector(1, bias)});

  return SineApproximant{epsilon, half * h, neg_knots, deltas, bias,
                         Network(std::move(layers))};
}

Problem make_sine_problem(int d, double T, double epsilon) {
  check_problem_args(d, T);
  auto gamma = std::make_shared<const SineApproximant>(sin_approx_network(epsilon));
  Problem p;
  p.name = "sine";
  p.d = d;
  p.T = T;
  p.epsilon = epsilon;
  const double inv_f = 1.0 / (d + 1);
  const double inv_g = 1.0 / d;
  p.f = [gamma, inv_f](const Vector& w) { return gamma->eval(scaled_sum(w, inv_f)); };
  p.g = [gamma, inv_g](const Vector& x) { return gamma->eval(scaled_sum(x, inv_g)); };
  p.f_target = [inv_f](const Vector& w) { return std::sin(scaled_sum(w, inv_f)); };
  p.g_target = [inv_g](const Vector& x) { return std::sin(scaled_sum(x, inv_g)); };
  p.phi_f = compose_networks(gamma->network, mean_network(d + 1));
  p.phi_g = compose_networks(gamma->network, mean_network(d));
  p.lipschitz_weights.assign(static_cast<size_t>(d) + 1, inv_f);
  return p;
}

namespace {

double norm2(const Vector& x) {
  double s = 0.0;
  for (double e : x) s += e * e;
  return std::sqrt(s);
}

Vector draw_box(const RandomStream& s, uint64_t base, int d, double half_width) {
  Vector x(static_cast<size_t>(d), 0.0);
  for (int i = 0; i < d; ++i)
    x[static_cast<size_t>(i)] = (2.0 * s.uniform_at(base + static_cast<uint64_t>(i)) - 1.0) * half_width;
  return x;
}

double ratio_of(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

ConditionReport check_theorem_conditions(const Problem& p, double c, double q, double beta,
                                         int n_samples, uint64_t seed) {
  if (n_samples < 1) throw ArgumentError("check_theorem_conditions: need at least one sample");
  if (!(c > 0.0)) throw ArgumentError("check_theorem_conditions: c must be positive");
  ConditionReport rep;
  rep.c = c;
  rep.q = q;
  rep.beta = beta;

  const int d = p.d;
  const double T = p.T;
  const double dc = std::pow(static_cast<double>(d), c);
  const double sqrtT = std::sqrt(T);
  const Vector zero_w(static_cast<size_t>(d) + 1, 0.0);
  const double f0 = std::fabs(p.f(zero_w));
  const double range = 10.0;

  double r_growth = 0.0, r_flip = 0.0, r_glip = 0.0, r_fapx = 0.0, r_gapx = 0.0;
  const bool have_weights = static_cast<int>(p.lipschitz_weights.size()) == d + 1;

  for (int j = 0; j < n_samples; ++j) {
    const int64_t path[2] = {kConditionTag, j};
    const RandomStream s = derive_stream(seed, ThetaView(path, 2));
    const Vector x = draw_box(s, 0, d, range);
    const Vector y = draw_box(s, 16, d, range);
    const Vector w = draw_box(s, 32, d + 1, range);
    const Vector w2 = draw_box(s, 64, d + 1, range);

    const double nx = norm2(x);
    r_growth = std::max(r_growth,
                        ratio_of(std::fabs(p.g(x)) + T * f0, c * std::sqrt(dc + nx * nx)));

    if (have_weights) {
      double den = 0.0;
      for (int v = 0; v <= d; ++v) {
        const double lam = v == 0 ? 1.0 : sqrtT;
        den += p.lipschitz_weights[static_cast<size_t>(v)] * lam *
               std::fabs(w[static_cast<size_t>(v)] - w2[static_cast<size_t>(v)]);
      }
      r_flip = std::max(r_flip, ratio_of(std::fabs(p.f(w) - p.f(w2)), den));
    }

    Vector diff(static_cast<size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) diff[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - y[static_cast<size_t>(i)];
    r_glip = std::max(r_glip,
                      ratio_of(std::fabs(p.g(x) - p.g(y)), c * dc * norm2(diff) / sqrtT));

    double apx_den = 0.0;
    for (int v = 0; v <= d; ++v) {
      const double lam = v == 0 ? 1.0 : sqrtT;
      apx_den += std::pow(lam, q) * std::pow(std::fabs(w[static_cast<size_t>(v)]), q);
    }
    r_fapx = std::max(r_fapx, ratio_of(std::fabs(p.f(w) - p.f_target(w)),
                                       p.epsilon * c * dc / T * (1.0 + apx_den)));
    r_gapx = std::max(r_gapx, ratio_of(std::fabs(p.g(x) - p.g_target(x)),
                                       p.epsilon * c * dc * std::pow(dc + nx * nx, beta)));
  }

  const bool have_nets = p.phi_f.has_value() && p.phi_g.has_value();
  double r_budget = 0.0;
  if (have_nets) {
    const double pmax = static_cast<double>(
        std::max(param_count(*p.phi_f), param_count(*p.phi_g)));
    r_budget = ratio_of(pmax, c * dc * std::pow(p.epsilon, -c));
  }

  auto add = [&rep](const std::string& name, double ratio, bool applicable) {
    ConditionCheck chk;
    chk.name = name;
    chk.max_ratio = ratio;
    chk.applicable = applicable;
    chk.ok = !applicable || ratio <= 1.0;
    rep.checks.push_back(chk);
    rep.all_ok = rep.all_ok && chk.ok;
  };
  add("growth", r_growth, true);
  add("nonlinearity-lipschitz", r_flip, have_weights);
  add("terminal-lipschitz", r_glip, true);
  add("nonlinearity-approx", r_fapx, true);
  add("terminal-approx", r_gapx, true);
  add("parameter-budget", r_budget, have_nets);
  return rep;
}

std::optional<double> smallest_passing_c(const Problem& p, double q, double beta,
                                         int n_samples, uint64_t seed) {
  for (double c = 0.5; c <= 16.0 + 1e-9; c += 0.25) {
    if (check_theorem_conditions(p, c, q, beta, n_samples, seed).all_ok) return c;
  }
  return std::nullopt;
}

}  // namespace picardnet
