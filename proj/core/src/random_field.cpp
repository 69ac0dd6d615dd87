#include "picardnet/random_field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "picardnet/errors.hpp"

namespace picardnet {

ThetaIndex::ThetaIndex(std::vector<int64_t> path) : path_(std::move(path)) {
  if (path_.empty()) throw ArgumentError("theta index must be nonempty");
}

ThetaIndex ThetaIndex::child(int64_t a, int64_t b) const {
  std::vector<int64_t> p = path_;
  p.push_back(a);
  p.push_back(b);
  return ThetaIndex(std::move(p));
}

namespace {

constexpr uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<uint64_t>(p >> 64);
  lo = static_cast<uint64_t>(p);
}

// Philox 4x64, 10 rounds.
void philox_block(uint64_t k0, uint64_t k1, uint64_t c0, uint64_t out[4]) {
  uint64_t c[4] = {c0, 0, 0, 0};
  for (int r = 0; r < 10; ++r) {
    uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    const uint64_t n0 = hi1 ^ c[1] ^ k0;
    const uint64_t n1 = lo1;
    const uint64_t n2 = hi0 ^ c[3] ^ k1;
    const uint64_t n3 = lo0;
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  out[0] = c[0];
  out[1] = c[1];
  out[2] = c[2];
  out[3] = c[3];
}

inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

uint64_t RandomStream::word_at(uint64_t index) const {
  uint64_t block[4];
  philox_block(k0_, k1_, index >> 2, block);
  return block[index & 3];
}

double RandomStream::uniform_at(uint64_t index) const {
  // 53 high bits, centered: strictly inside (0,1).
  return (static_cast<double>(word_at(index) >> 11) + 0.5) * 0x1.0p-53;
}

RandomStream derive_stream(uint64_t seed, ThetaView theta) {
  if (theta.empty()) throw ArgumentError("derive_stream: theta must be nonempty");
  uint64_t h = mix64(seed ^ 0x243F6A8885A308D3ULL);
  h = mix64(h ^ mix64(static_cast<uint64_t>(theta.size())));
  for (int64_t e : theta) h = mix64(h ^ mix64(static_cast<uint64_t>(e)));
  return RandomStream(h, mix64(h + kWeyl0));
}

double RandomRealization::uniform(ThetaView theta) const {
  return derive_stream(seed_, theta).uniform_at(0);
}

Vector RandomRealization::gaussian_vector(ThetaView theta, int d) const {
  if (d < 1) throw ArgumentError("gaussian_vector: dimension must be positive");
  const RandomStream s = derive_stream(seed_, theta);
  Vector z(static_cast<size_t>(d), 0.0);
  for (int j = 0; j < d; j += 2) {
    const double u1 = s.uniform_at(static_cast<uint64_t>(1 + j));
    const double u2 = s.uniform_at(static_cast<uint64_t>(2 + j));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    z[static_cast<size_t>(j)] = r * std::cos(phi);
    if (j + 1 < d) z[static_cast<size_t>(j + 1)] = r * std::sin(phi);
  }
  return z;
}

double RandomRealization::time_fraction(ThetaView theta) const {
  return arcsine_from_uniform(uniform(theta));
}

Vector RandomRealization::brownian_increment(ThetaView theta, int d, double s, double t) const {
  if (!(s >= 0.0)) throw ArgumentError("brownian_increment: s must be nonnegative");
  if (!(s < t)) throw ArgumentError("brownian_increment: need s < t");
  Vector z = gaussian_vector(theta, d);
  const double scale = std::sqrt(t - s);
  for (double& e : z) e *= scale;
  return z;
}

double arcsine_from_uniform(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ArgumentError("arcsine_from_uniform: u must lie in (0,1)");
  const double s = std::sin(0.5 * std::numbers::pi * u);
  return s * s;
}

double time_point(double t, double T, double fraction) {
  if (!(t < T)) throw ArgumentError("time_point: need t < T");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ArgumentError("time_point: fraction must lie in [0,1]");
  return t + (T - t) * fraction;
}

double rho_density(double t, double s, double T) {
  if (!(t < s && s < T)) throw ArgumentError("rho_density: need t < s < T");
  return 1.0 / (std::numbers::pi * std::sqrt((T - s) * (s - t)));
}

}  // namespace picardnet
