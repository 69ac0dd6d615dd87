#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "picardnet/linalg.hpp"

namespace picardnet {

using ThetaView = std::span<const int64_t>;

// Index path into the family of independent streams. Children extend the
// path, so distinct paths never share draws.
class ThetaIndex {
 public:
  explicit ThetaIndex(std::vector<int64_t> path);
  static ThetaIndex root(int64_t v) { return ThetaIndex({v}); }

  ThetaIndex child(int64_t a, int64_t b) const;
  ThetaView view() const { return path_; }
  const std::vector<int64_t>& path() const { return path_; }

  friend bool operator==(const ThetaIndex&, const ThetaIndex&) = default;

 private:
  std::vector<int64_t> path_;
};

// Counter-based stream addressed by (seed, theta). Uniform outputs lie
// strictly inside (0,1) and are random-access by index.
class RandomStream {
 public:
  RandomStream(uint64_t key0, uint64_t key1) : k0_(key0), k1_(key1) {}
  double uniform_at(uint64_t index) const;
  uint64_t word_at(uint64_t index) const;

 private:
  uint64_t k0_, k1_;
};

// The stream key absorbs the length-prefixed theta path, so the encoding is
// prefix-free: no path is a continuation of another's draws.
RandomStream derive_stream(uint64_t seed, ThetaView theta);

// One frozen realization of all randomness: every query is a pure function
// of (seed, theta), so repeated or concurrent queries always agree. Each
// theta carries one standard Gaussian vector and one uniform.
class RandomRealization {
 public:
  explicit RandomRealization(uint64_t seed) : seed_(seed) {}
  uint64_t seed() const { return seed_; }

  double uniform(ThetaView theta) const;
  Vector gaussian_vector(ThetaView theta, int d) const;

  // sin^2(pi U / 2) with U the theta uniform; arcsine-distributed on (0,1).
  double time_fraction(ThetaView theta) const;

  // sqrt(t - s) * xi_theta for 0 <= s < t.
  Vector brownian_increment(ThetaView theta, int d, double s, double t) const;

 private:
  uint64_t seed_;
};

// Deterministic transform behind time_fraction.
double arcsine_from_uniform(double u);

// t + (T - t) * fraction.
double time_point(double t, double T, double fraction);

// Sampling density of the interior time point on (t, T):
// 1 / (pi * sqrt((T - s) * (s - t))).
double rho_density(double t, double s, double T);

}  // namespace picardnet
