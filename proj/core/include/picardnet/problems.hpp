#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "picardnet/network.hpp"

namespace picardnet {

// Semilinear heat problem on [0,T] x R^d:
//   dv/dt + (1/2) Laplacian v + f(v, grad v) = 0,  v(T, .) = g.
// f takes the stacked (value, gradient) vector in R^{d+1}.
struct Problem {
  std::string name;
  int d = 1;
  double T = 1.0;
  std::function<double(const Vector&)> f;
  std::function<double(const Vector&)> g;

  // Network forms of f and g when they are ReLU-representable.
  std::optional<Network> phi_f;
  std::optional<Network> phi_g;

  // Closed-form solution (t, x) -> (v, grad v), when known.
  std::optional<std::function<Vector(double, const Vector&)>> exact;

  // Targets that f and g approximate to accuracy epsilon. For problems with
  // exact f and g these are the functions themselves and epsilon is 0.
  std::function<double(const Vector&)> f_target;
  std::function<double(const Vector&)> g_target;
  double epsilon = 0.0;

  // Componentwise Lipschitz weights L_0..L_d of f.
  std::vector<double> lipschitz_weights;
};

// f(w) = first gradient component, g(x) = x_1.
// Exact: v(t,x) = x_1 + (T - t), grad v = e_1.
Problem make_transport_problem(int d, double T);

enum class LinearHeatVariant { kAffine, kQuadratic };

// f = 0 with affine g(x) = sum x_i (exact: sum x_i, gradient of ones) or
// quadratic g(x) = |x|^2 (exact: |x|^2 + d (T - t), gradient 2x).
Problem make_linear_heat_problem(int d, double T, LinearHeatVariant variant);

// Piecewise-linear, 1-Lipschitz sine approximant on [-R, R] with a knot at 0
// and constant continuation outside. |sin(x) - gamma(x)| <= eps (1 + |x|^1.5)
// for all x. The scalar evaluator and the network perform identical
// arithmetic, so they agree bit for bit.
struct SineApproximant {
  double epsilon = 0.0;
  double valid_range = 0.0;  // clamp boundary R
  Vector neg_knots;          // first-layer biases, entry k is -x_k
  Vector deltas;             // slope increments, one per knot
  double bias = 0.0;         // output bias, chosen so eval(0) == 0 exactly
  Network network;           // dims (1, K+1, 1)

  double eval(double x) const;
};

SineApproximant sin_approx_network(double epsilon);

// f(w) = gamma(mean of the d+1 entries), g(x) = gamma(mean of the d
// entries), approximating sin of the respective means.
Problem make_sine_problem(int d, double T, double epsilon);

struct ConditionCheck {
  std::string name;
  double max_ratio = 0.0;
  bool applicable = true;
  bool ok = true;
};

struct ConditionReport {
  double c = 0.0, q = 0.0, beta = 0.0;
  std::vector<ConditionCheck> checks;
  bool all_ok = true;
};

// Numerical audit of the well-posedness conditions on random grids. Each
// check reports max LHS/RHS; a ratio above one is a violation.
ConditionReport check_theorem_conditions(const Problem& p, double c, double q, double beta,
                                         int n_samples = 1000, uint64_t seed = 7);

// Smallest constant c on a 0.25 grid in [0.5, 16] for which every check
// passes, if any.
std::optional<double> smallest_passing_c(const Problem& p, double q, double beta,
                                         int n_samples = 1000, uint64_t seed = 7);

}  // namespace picardnet
