#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "picardnet/errors.hpp"
#include "picardnet/random_field.hpp"

using namespace picardnet;

TEST_CASE("streams are deterministic and order independent") {
  const std::vector<int64_t> theta = {0, 3, -5};
  const RandomStream a = derive_stream(99, theta);
  const RandomStream b = derive_stream(99, theta);
  for (uint64_t i = 0; i < 100; ++i) {
    CHECK(a.uniform_at(i) == b.uniform_at(i));
    CHECK(a.word_at(i) == b.word_at(i));
  }
  // Re-query in shuffled order; values must not depend on history.
  std::vector<uint64_t> order(100);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(4));
  std::vector<double> forward(100);
  for (uint64_t i = 0; i < 100; ++i) forward[i] = a.uniform_at(i);
  for (uint64_t i : order) CHECK(b.uniform_at(i) == forward[i]);
}

TEST_CASE("uniforms lie strictly inside the unit interval") {
  const RandomStream s = derive_stream(1, std::vector<int64_t>{2});
  for (uint64_t i = 0; i < 100000; ++i) {
    const double u = s.uniform_at(i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("path encoding is prefix-free") {
  const RandomStream a = derive_stream(7, std::vector<int64_t>{1});
  const RandomStream b = derive_stream(7, std::vector<int64_t>{1, 1});
  int differs = 0;
  for (uint64_t i = 0; i < 100; ++i)
    if (a.uniform_at(i) != b.uniform_at(i)) ++differs;
  CHECK(differs == 100);

  // Same path, different seed.
  const RandomStream c = derive_stream(8, std::vector<int64_t>{1});
  CHECK(a.uniform_at(0) != c.uniform_at(0));

  // Child paths extend the parent path.
  const ThetaIndex root = ThetaIndex::root(1);
  const ThetaIndex kid = root.child(2, 3);
  CHECK(kid.path() == std::vector<int64_t>{1, 2, 3});
  CHECK_FALSE(kid == root);
}

TEST_CASE("distinct theta streams look independent") {
  const RandomStream a = derive_stream(123, std::vector<int64_t>{3});
  const RandomStream b = derive_stream(123, std::vector<int64_t>{4});
  const int n = 10000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double u = a.uniform_at(static_cast<uint64_t>(i));
    const double v = b.uniform_at(static_cast<uint64_t>(i));
    sa += u;
    sb += v;
    saa += u * u;
    sbb += v * v;
    sab += u * v;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double var_a = saa / n - (sa / n) * (sa / n);
  const double var_b = sbb / n - (sb / n) * (sb / n);
  CHECK(std::fabs(cov / std::sqrt(var_a * var_b)) < 0.05);
}

TEST_CASE("brownian increments have the right moments") {
  const RandomRealization omega(2026);
  const double s = 0.25, t = 1.0;
  const int d = 3, n = 100000;
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::vector<int64_t> theta = {9, i};
    const Vector w = omega.brownian_increment(theta, d, s, t);
    REQUIRE(static_cast<int>(w.size()) == d);
    for (int k = 0; k < d; ++k) {
      mean[static_cast<size_t>(k)] += w[static_cast<size_t>(k)];
      var[static_cast<size_t>(k)] += w[static_cast<size_t>(k)] * w[static_cast<size_t>(k)];
    }
  }
  const double tol_mean = 3.0 * std::sqrt((t - s) / n);
  for (int k = 0; k < d; ++k) {
    CHECK(std::fabs(mean[static_cast<size_t>(k)] / n) < tol_mean);
    CHECK(var[static_cast<size_t>(k)] / n == doctest::Approx(t - s).epsilon(0.05));
  }
}

TEST_CASE("brownian increments are reproducible and validated") {
  const RandomRealization omega(5);
  const std::vector<int64_t> theta = {0, 2, 2};
  const Vector a = omega.brownian_increment(theta, 4, 0.1, 0.7);
  const Vector b = omega.brownian_increment(theta, 4, 0.1, 0.7);
  CHECK(a == b);
  // Scaling by sqrt(t - s) on the same Gaussian.
  const Vector c = omega.brownian_increment(theta, 4, 0.1, 0.25);
  const double ratio = std::sqrt(0.15 / 0.6);
  for (int k = 0; k < 4; ++k)
    CHECK(c[static_cast<size_t>(k)] ==
          doctest::Approx(a[static_cast<size_t>(k)] * ratio).epsilon(1e-12));
  CHECK_THROWS_AS(omega.brownian_increment(theta, 4, 0.7, 0.7), ArgumentError);
  CHECK_THROWS_AS(omega.brownian_increment(theta, 4, 0.8, 0.7), ArgumentError);
  CHECK_THROWS_AS(omega.brownian_increment(theta, 4, -0.1, 0.7), ArgumentError);
}

TEST_CASE("arcsine transform hits known values") {
  CHECK(arcsine_from_uniform(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(arcsine_from_uniform(1.0 / 3.0) == doctest::Approx(0.25).epsilon(1e-14));
  const RandomRealization omega(11);
  const std::vector<int64_t> theta = {1, 2};
  CHECK(omega.time_fraction(theta) == arcsine_from_uniform(omega.uniform(theta)));
}

TEST_CASE("time fractions follow the arcsine law") {
  const RandomRealization omega(31337);
  const int n = 100000;
  std::vector<double> samples(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    samples[static_cast<size_t>(i)] = omega.time_fraction(std::vector<int64_t>{5, i});
  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double b = samples[static_cast<size_t>(i)];
    const double cdf = (2.0 / M_PI) * std::asin(std::sqrt(b));
    ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / n - cdf));
  }
  CHECK(ks < 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("time_point maps fractions into the open interval") {
  CHECK(time_point(0.0, 1.0, 0.25) == 0.25);
  CHECK(time_point(0.5, 1.0, 0.5) == 0.75);
  double prev = 0.0;
  for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double s = time_point(0.2, 0.9, f);
    CHECK(s > 0.2);
    CHECK(s < 0.9);
    CHECK(s > prev);
    prev = s;
  }
  CHECK_THROWS_AS(time_point(1.0, 1.0, 0.5), ArgumentError);
  CHECK_THROWS_AS(time_point(1.2, 1.0, 0.5), ArgumentError);
}

TEST_CASE("density values and asymptotics") {
  CHECK(rho_density(0.0, 0.5, 1.0) == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
  CHECK(rho_density(0.0, 1e-8, 1.0) > 1e3);
  CHECK_THROWS_AS(rho_density(0.0, 0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(rho_density(0.0, 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(rho_density(0.5, 0.4, 1.0), ArgumentError);
}

TEST_CASE("density integrates to one") {
  // Split at the midpoint and substitute s = t + (T-t)u^2 (and mirrored),
  // which removes both square-root singularities; composite midpoint rule
  // never evaluates at the endpoints.
  auto integral = [](double t, double T) {
    const int n = 20000;
    const double b = 1.0 / std::sqrt(2.0);
    const double h = b / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = (i + 0.5) * h;
      const double left = t + (T - t) * u * u;
      const double right = T - (T - t) * u * u;
      acc += 2.0 * (T - t) * u * (rho_density(t, left, T) + rho_density(t, right, T)) * h;
    }
    return acc;
  };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 2.0), ulen(0.05, 3.0);
  for (int rep = 0; rep < 10; ++rep) {
    const double t = ut(rng);
    const double T = t + ulen(rng);
    CHECK(integral(t, T) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("realizations agree across instances and query order") {
  const RandomRealization a(77), b(77);
  std::vector<std::vector<int64_t>> thetas;
  for (int i = 0; i < 50; ++i) thetas.push_back({i % 7, -i, 3 * i});
  std::vector<Vector> ga(50);
  std::vector<double> ua(50);
  for (int i = 0; i < 50; ++i) {
    ga[static_cast<size_t>(i)] = a.gaussian_vector(thetas[static_cast<size_t>(i)], 5);
    ua[static_cast<size_t>(i)] = a.uniform(thetas[static_cast<size_t>(i)]);
  }
  std::vector<int> order(50);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  for (int i : order) {
    CHECK(b.uniform(thetas[static_cast<size_t>(i)]) == ua[static_cast<size_t>(i)]);
    CHECK(b.gaussian_vector(thetas[static_cast<size_t>(i)], 5) == ga[static_cast<size_t>(i)]);
  }
}
