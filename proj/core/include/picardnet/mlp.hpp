#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "picardnet/problems.hpp"
#include "picardnet/random_field.hpp"

namespace picardnet {

// Value and gradient estimate, components (v, dv/dx_1, ..., dv/dx_d).
struct MlpEstimate {
  Vector components;

  double value() const { return components[0]; }
  int d() const { return static_cast<int>(components.size()) - 1; }
  double gradient(int i) const { return components[static_cast<size_t>(i) + 1]; }
};

struct MlpConfig {
  int n = 2;
  int m = 2;
  double t = 0.0;
  uint64_t seed = 42;
  std::vector<int64_t> theta_root{0};
  // Refuse runs with m^(2n) above this budget.
  double max_evals = 1e8;
};

// Diagonal weight (1, sqrt(t), ..., sqrt(t)) applied to (value, gradient).
Vector scaling_vector(double t, int d);

// One interior-time draw: everything derived from theta's uniform and
// Gaussian vector. The same draw feeds the recursion and the compiler.
struct LevelDraw {
  double time;     // s in (t, T)
  double dt;       // s - t
  double inv_rho;  // pi * sqrt((T - s)(s - t))
  Vector dw;       // Brownian increment over [t, s]
};

LevelDraw sample_level_draw(const RandomRealization& omega, ThetaView theta, int d, double t,
                            double T);

// Full-history recursive estimator of (v, grad v)(t, x) with n levels and
// branching base m, driven by the frozen realization of cfg.seed.
MlpEstimate mlp_estimate(const Problem& p, const MlpConfig& cfg, const Vector& x);
MlpEstimate mlp_estimate(const Problem& p, const MlpConfig& cfg, const Vector& x,
                         const RandomRealization& omega);

// Closed-form solution lookup; CapabilityError when the problem has none.
MlpEstimate reference_solution(const Problem& p, double t, const Vector& x);

struct ErrorStats {
  double error = 0.0;
  double std_err = 0.0;
};

// Monte Carlo estimate of the weighted L2 distance over x in [0,1]^d between
// two fields at a fixed time, gradient part weighted by sqrt(T - t). The
// callbacks receive the point index and location.
using PointField = std::function<Vector(int, const Vector&)>;
ErrorStats weighted_l2_distance(const PointField& a, const PointField& b, int d,
                                double weight_time, int n_points, uint64_t seed,
                                const std::vector<int64_t>& theta_root);

// Distance between the estimator and a reference field at cfg.t, with fresh
// estimator randomness per point.
ErrorStats weighted_l2_error(const Problem& p, const MlpConfig& cfg,
                             const std::function<Vector(double, const Vector&)>& reference,
                             int n_points);

}  // namespace picardnet
