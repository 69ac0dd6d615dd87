#include "picardnet/mlp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "picardnet/errors.hpp"

namespace picardnet {

namespace {

constexpr int64_t kPointTag = 101;
constexpr int64_t kGridTag = 102;
constexpr int kMaxLevels = 99;

int64_t ipow(int64_t base, int exp) {
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_config(const Problem& p, const MlpConfig& cfg, const Vector& x) {
  if (static_cast<int>(x.size()) != p.d)
    throw ShapeError("mlp_estimate: point has length " + std::to_string(x.size()) +
                     ", problem dimension is " + std::to_string(p.d));
  if (cfg.n < 0) throw ArgumentError("mlp_estimate: level must be nonnegative");
  if (cfg.n > kMaxLevels) throw ArgumentError("mlp_estimate: level too large");
  if (cfg.m < 1) throw ArgumentError("mlp_estimate: branching base must be positive");
  if (!(cfg.t >= 0.0)) throw ArgumentError("mlp_estimate: time must be nonnegative");
  // Guard: stay strictly below the terminal time.
  if (!(cfg.t < p.T - 1e-12 * p.T))
    throw ArgumentError("mlp_estimate: time must stay below the terminal time");
  if (cfg.theta_root.empty()) throw ArgumentError("mlp_estimate: empty theta root");
  if (std::pow(static_cast<double>(cfg.m), 2.0 * cfg.n) > cfg.max_evals)
    throw ResourceError("mlp_estimate: m^(2n) exceeds the evaluation budget");
}

// The recursion below resolves children in canonical order: terminal block
// first, then levels ascending with the paired lower-level branch directly
// after its partner. Draw values do not depend on that order, only on the
// theta paths.
void accumulate(const Problem& p, int n, int m, double t, const RandomRealization& omega,
                std::vector<int64_t>& path, const Vector& x, Vector& out) {
  const int d = p.d;
  if (n <= 0) {
    for (double& e : out) e = 0.0;
    return;
  }
  for (double& e : out) e = 0.0;

  const double gx = p.g(x);
  out[0] = gx;

  const double horizon = p.T - t;
  const int64_t mn = ipow(m, n);
  Vector shifted(static_cast<size_t>(d), 0.0);
  for (int64_t i = 1; i <= mn; ++i) {
    path.push_back(0);
    path.push_back(-i);
    const Vector dw = omega.brownian_increment(path, d, t, p.T);
    path.pop_back();
    path.pop_back();
    for (int j = 0; j < d; ++j) shifted[static_cast<size_t>(j)] = x[static_cast<size_t>(j)] + dw[static_cast<size_t>(j)];
    const double diff = (p.g(shifted) - gx) / static_cast<double>(mn);
    out[0] += diff;
    for (int j = 0; j < d; ++j)
      out[static_cast<size_t>(j) + 1] += dw[static_cast<size_t>(j)] / horizon * diff;
  }

  Vector sub(static_cast<size_t>(d) + 1, 0.0);
  for (int level = 0; level < n; ++level) {
    const int64_t count = ipow(m, n - level);
    for (int64_t i = 1; i <= count; ++i) {
      path.push_back(level);
      path.push_back(i);
      const LevelDraw draw = sample_level_draw(omega, path, d, t, p.T);
      for (int j = 0; j < d; ++j)
        shifted[static_cast<size_t>(j)] = x[static_cast<size_t>(j)] + draw.dw[static_cast<size_t>(j)];
      accumulate(p, level, m, draw.time, omega, path, shifted, sub);
      double val = p.f(sub);
      path.pop_back();
      path.pop_back();
      if (level >= 1) {
        path.push_back(-level);
        path.push_back(i);
        accumulate(p, level - 1, m, draw.time, omega, path, shifted, sub);
        val -= p.f(sub);
        path.pop_back();
        path.pop_back();
      }
      const double w = draw.inv_rho / static_cast<double>(count);
      out[0] += val * w;
      for (int j = 0; j < d; ++j)
        out[static_cast<size_t>(j) + 1] += draw.dw[static_cast<size_t>(j)] / draw.dt * val * w;
    }
  }
}

}  // namespace

Vector scaling_vector(double t, int d) {
  if (!(t >= 0.0)) throw ArgumentError("scaling_vector: time must be nonnegative");
  if (d < 1) throw ArgumentError("scaling_vector: dimension must be positive");
  Vector lam(static_cast<size_t>(d) + 1, std::sqrt(t));
  lam[0] = 1.0;
  return lam;
}

LevelDraw sample_level_draw(const RandomRealization& omega, ThetaView theta, int d, double t,
                            double T) {
  if (!(t < T)) throw ArgumentError("sample_level_draw: need t < T");
  const double u = omega.uniform(theta);
  const double s = std::sin(0.5 * std::numbers::pi * u);
  const double c = std::cos(0.5 * std::numbers::pi * u);
  const double horizon = T - t;
  LevelDraw out;
  out.dt = horizon * (s * s);
  out.time = t + out.dt;
  if (out.time >= T) {
    // A fraction within one ulp of 1 can round the sampled time onto the
    // terminal time; pull it back inside so recursive estimates stay valid.
    // Keep dt as the exact positive product: recomputing it from the clamped
    // time can collapse it to zero when t already sits one ulp below T.
    out.time = std::nextafter(T, t);
  }
  out.inv_rho = std::numbers::pi * std::sqrt((T - out.time) * out.dt);
  out.dw = omega.gaussian_vector(theta, d);
  const double scale = std::sqrt(out.dt);
  for (double& e : out.dw) e *= scale;
  return out;
}

MlpEstimate mlp_estimate(const Problem& p, const MlpConfig& cfg, const Vector& x) {
  return mlp_estimate(p, cfg, x, RandomRealization(cfg.seed));
}

MlpEstimate mlp_estimate(const Problem& p, const MlpConfig& cfg, const Vector& x,
                         const RandomRealization& omega) {
  check_config(p, cfg, x);
  std::vector<int64_t> path = cfg.theta_root;
  path.reserve(path.size() + 2 * static_cast<size_t>(cfg.n) + 2);
  Vector out(static_cast<size_t>(p.d) + 1, 0.0);
  accumulate(p, cfg.n, cfg.m, cfg.t, omega, path, x, out);
  return MlpEstimate{std::move(out)};
}

MlpEstimate reference_solution(const Problem& p, double t, const Vector& x) {
  if (!p.exact.has_value())
    throw CapabilityError("reference_solution: problem '" + p.name + "' has no closed form");
  if (static_cast<int>(x.size()) != p.d)
    throw ShapeError("reference_solution: point length does not match problem dimension");
  if (!(t >= 0.0 && t <= p.T)) throw ArgumentError("reference_solution: time outside [0, T]");
  Vector v = (*p.exact)(t, x);
  if (static_cast<int>(v.size()) != p.d + 1)
    throw ShapeError("reference_solution: exact field returned wrong length");
  return MlpEstimate{std::move(v)};
}

ErrorStats weighted_l2_distance(const PointField& a, const PointField& b, int d,
                                double weight_time, int n_points, uint64_t seed,
                                const std::vector<int64_t>& theta_root) {
  if (n_points < 1) throw ArgumentError("weighted_l2_distance: need at least one point");
  const Vector lam = scaling_vector(weight_time, d);
  double sum = 0.0, sum_sq = 0.0;
  std::vector<int64_t> grid_path = theta_root;
  grid_path.push_back(kGridTag);
  grid_path.push_back(0);
  Vector x(static_cast<size_t>(d), 0.0);
  for (int j = 0; j < n_points; ++j) {
    grid_path.back() = j;
    const RandomStream s = derive_stream(seed, grid_path);
    for (int i = 0; i < d; ++i) x[static_cast<size_t>(i)] = s.uniform_at(static_cast<uint64_t>(i));
    const Vector va = a(j, x);
    const Vector vb = b(j, x);
    if (va.size() != lam.size() || vb.size() != lam.size())
      throw ShapeError("weighted_l2_distance: field returned wrong length");
    double y = 0.0;
    for (size_t v = 0; v < lam.size(); ++v) {
      const double dlt = lam[v] * (va[v] - vb[v]);
      y += dlt * dlt;
    }
    sum += y;
    sum_sq += y * y;
  }
  const double mean = sum / n_points;
  ErrorStats stats;
  stats.error = std::sqrt(mean);
  if (n_points > 1 && stats.error > 0.0) {
    const double var = (sum_sq - sum * sum / n_points) / (n_points - 1);
    const double se_mean = std::sqrt(var > 0.0 ? var / n_points : 0.0);
    stats.std_err = se_mean / (2.0 * stats.error);
  }
  return stats;
}

ErrorStats weighted_l2_error(const Problem& p, const MlpConfig& cfg,
                             const std::function<Vector(double, const Vector&)>& reference,
                             int n_points) {
  MlpConfig point_cfg = cfg;
  point_cfg.theta_root.push_back(kPointTag);
  point_cfg.theta_root.push_back(0);
  PointField est = [&p, &point_cfg](int j, const Vector& x) {
    MlpConfig c = point_cfg;
    c.theta_root.back() = j;
    return mlp_estimate(p, c, x).components;
  };
  PointField ref = [&reference, &cfg](int, const Vector& x) { return reference(cfg.t, x); };
  return weighted_l2_distance(est, ref, p.d, p.T - cfg.t, n_points, cfg.seed, cfg.theta_root);
}

}  // namespace picardnet
