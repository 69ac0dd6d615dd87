#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "picardnet/errors.hpp"
#include "picardnet/network.hpp"
#include "picardnet/problems.hpp"

using namespace picardnet;

namespace {

const ConditionCheck& find_check(const ConditionReport& rep, const std::string& name) {
  for (const ConditionCheck& c : rep.checks)
    if (c.name == name) return c;
  REQUIRE(false);
  return rep.checks.front();
}

Vector random_point(std::mt19937_64& rng, int d, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Vector x(static_cast<size_t>(d));
  for (double& e : x) e = u(rng);
  return x;
}

}  // namespace

TEST_CASE("transport problem carries its closed form") {
  const Problem p = make_transport_problem(2, 1.0);
  CHECK(p.name == "transport");
  CHECK(p.d == 2);
  CHECK(p.T == 1.0);
  CHECK(p.epsilon == 0.0);

  const Vector w{4.5, -1.25, 9.0};
  CHECK(p.f(w) == -1.25);
  CHECK(p.g(Vector{0.3, 7.0}) == 0.3);

  REQUIRE(p.exact.has_value());
  const Vector v0 = (*p.exact)(0.0, Vector{0.3, 7.0});
  CHECK(v0[0] == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(v0[1] == 1.0);
  CHECK(v0[2] == 0.0);
  const Vector vT = (*p.exact)(1.0, Vector{0.3, 7.0});
  CHECK(vT[0] == doctest::Approx(p.g(Vector{0.3, 7.0})).epsilon(1e-14));

  REQUIRE(p.lipschitz_weights.size() == 3);
  CHECK(p.lipschitz_weights[0] == 0.0);
  CHECK(p.lipschitz_weights[1] == 1.0);
  CHECK(p.lipschitz_weights[2] == 0.0);

  // Hand-built affine networks reproduce f and g without rounding at all.
  REQUIRE(p.phi_f.has_value());
  REQUIRE(p.phi_g.has_value());
  std::mt19937_64 rng(601);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vector wr = random_point(rng, 3, 10.0);
    CHECK(realize(*p.phi_f, wr)[0] == p.f(wr));
    const Vector xr = random_point(rng, 2, 10.0);
    CHECK(realize(*p.phi_g, xr)[0] == p.g(xr));
  }

  CHECK_THROWS_AS(make_transport_problem(0, 1.0), ArgumentError);
  CHECK_THROWS_AS(make_transport_problem(2, 0.0), ArgumentError);
  CHECK_THROWS_AS(make_transport_problem(2, -3.0), ArgumentError);
}

TEST_CASE("linear heat problems carry their closed forms") {
  const Problem aff = make_linear_heat_problem(3, 1.0, LinearHeatVariant::kAffine);
  CHECK(aff.name == "linear-affine");
  REQUIRE(aff.exact.has_value());
  std::mt19937_64 rng(602);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector x = random_point(rng, 3, 5.0);
    const double t = 0.9 * std::generate_canonical<double, 53>(rng);
    const Vector v = (*aff.exact)(t, x);
    CHECK(v[0] == doctest::Approx(x[0] + x[1] + x[2]).epsilon(1e-14));
    CHECK(v[1] == 1.0);
    CHECK(v[2] == 1.0);
    CHECK(v[3] == 1.0);
    REQUIRE(aff.phi_g.has_value());
    CHECK(realize(*aff.phi_g, x)[0] == aff.g(x));
    REQUIRE(aff.phi_f.has_value());
    const Vector w = random_point(rng, 4, 5.0);
    CHECK(realize(*aff.phi_f, w)[0] == 0.0);
    CHECK(aff.f(w) == 0.0);
  }

  const Problem quad = make_linear_heat_problem(3, 1.0, LinearHeatVariant::kQuadratic);
  CHECK(quad.name == "linear-quadratic");
  REQUIRE(quad.exact.has_value());
  const Vector q0 = (*quad.exact)(0.0, Vector{0.0, 0.0, 0.0});
  CHECK(q0[0] == doctest::Approx(3.0).epsilon(1e-14));
  const Vector q1 = (*quad.exact)(1.0, Vector{1.0, 0.0, 0.0});
  CHECK(q1[1] == 2.0);
  CHECK(q1[2] == 0.0);
  CHECK(q1[3] == 0.0);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector x = random_point(rng, 3, 5.0);
    const double t = 0.9 * std::generate_canonical<double, 53>(rng);
    const double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    CHECK((*quad.exact)(t, x)[0] == doctest::Approx(n2 + 3.0 * (1.0 - t)).epsilon(1e-13));
  }
  // The squared norm has no ReLU form; only f comes with a network.
  CHECK(!quad.phi_g.has_value());
  CHECK(quad.phi_f.has_value());

  CHECK_THROWS_AS(make_linear_heat_problem(0, 1.0, LinearHeatVariant::kAffine), ArgumentError);
  CHECK_THROWS_AS(make_linear_heat_problem(2, -1.0, LinearHeatVariant::kQuadratic),
                  ArgumentError);
}

TEST_CASE("sine approximant interpolates within the growth allowance") {
  for (double eps : {0.5, 0.2, 0.1}) {
    const SineApproximant gamma = sin_approx_network(eps);
    CHECK(gamma.epsilon == eps);
    CHECK(gamma.valid_range >= 2.0 * std::numbers::pi - 1e-12);
    const int grid = 4001;
    for (int i = 0; i < grid; ++i) {
      const double x = -20.0 + 40.0 * i / (grid - 1);
      const double err = std::fabs(std::sin(x) - gamma.eval(x));
      CHECK(err <= eps * (1.0 + std::pow(std::fabs(x), 1.5)));
    }
    // Constant continuation outside the clamp boundary. The slope increments
    // telescope to zero, so only per-term dot product rounding remains.
    CHECK(std::fabs(gamma.eval(gamma.valid_range + 3.0) -
                    gamma.eval(gamma.valid_range + 30.0)) <= 1e-12);
    CHECK(gamma.eval(-gamma.valid_range - 3.0) == gamma.eval(-gamma.valid_range - 30.0));
  }

  const SineApproximant g01 = sin_approx_network(0.1);
  CHECK(g01.eval(0.0) == 0.0);

  const LayerDims dd = dims(g01.network);
  CHECK(dd.size() == 3);
  CHECK(dd.input() == 1);
  CHECK(dd.output() == 1);
  CHECK(dd[1] == static_cast<int>(g01.deltas.size()));
  CHECK(g01.neg_knots.size() == g01.deltas.size());
}

TEST_CASE("sine approximant evaluator matches its network bit for bit") {
  std::mt19937_64 rng(603);
  for (double eps : {0.3, 0.1}) {
    const SineApproximant gamma = sin_approx_network(eps);
    for (int rep = 0; rep < 1000; ++rep) {
      const Vector x = random_point(rng, 1, 25.0);
      CHECK(realize(gamma.network, x)[0] == gamma.eval(x[0]));
    }
  }
}

TEST_CASE("sine approximant is 1-Lipschitz") {
  std::mt19937_64 rng(604);
  const SineApproximant gamma = sin_approx_network(0.1);
  for (int rep = 0; rep < 10000; ++rep) {
    const Vector p = random_point(rng, 2, 30.0);
    CHECK(std::fabs(gamma.eval(p[0]) - gamma.eval(p[1])) <= std::fabs(p[0] - p[1]) + 1e-12);
  }
}

TEST_CASE("sine approximant rejects accuracies outside the unit interval") {
  CHECK_THROWS_AS(sin_approx_network(0.0), ArgumentError);
  CHECK_THROWS_AS(sin_approx_network(1.0), ArgumentError);
  CHECK_THROWS_AS(sin_approx_network(1.5), ArgumentError);
  CHECK_THROWS_AS(sin_approx_network(-0.1), ArgumentError);
  CHECK_THROWS_AS(make_sine_problem(2, 1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(make_sine_problem(0, 1.0, 0.1), ArgumentError);
}

TEST_CASE("sine problem wires the approximant through the mean") {
  std::mt19937_64 rng(605);
  for (int d : {1, 2, 4}) {
    for (double eps : {0.2, 0.1}) {
      const Problem p = make_sine_problem(d, 1.0, eps);
      CHECK(p.name == "sine");
      CHECK(p.epsilon == eps);
      CHECK(!p.exact.has_value());

      REQUIRE(static_cast<int>(p.lipschitz_weights.size()) == d + 1);
      double lsum = 0.0;
      for (double l : p.lipschitz_weights) {
        CHECK(l == doctest::Approx(1.0 / (d + 1)).epsilon(1e-15));
        lsum += l;
      }
      CHECK(lsum <= 1.0 + 1e-12);

      REQUIRE(p.phi_f.has_value());
      REQUIRE(p.phi_g.has_value());
      CHECK(dims(*p.phi_f).size() == 5);
      CHECK(dims(*p.phi_g).size() == 5);

      for (int rep = 0; rep < 1000; ++rep) {
        const Vector w = random_point(rng, d + 1, 8.0);
        const double fv = p.f(w);
        CHECK(std::fabs(realize(*p.phi_f, w)[0] - fv) <= 1e-12 * (1.0 + std::fabs(fv)));
        const Vector x = random_point(rng, d, 8.0);
        const double gv = p.g(x);
        CHECK(std::fabs(realize(*p.phi_g, x)[0] - gv) <= 1e-12 * (1.0 + std::fabs(gv)));
      }

      // Componentwise Lipschitz chain through the mean.
      for (int rep = 0; rep < 1000; ++rep) {
        const Vector w1 = random_point(rng, d + 1, 12.0);
        const Vector w2 = random_point(rng, d + 1, 12.0);
        double den = 0.0;
        for (int i = 0; i <= d; ++i)
          den += std::fabs(w1[static_cast<size_t>(i)] - w2[static_cast<size_t>(i)]);
        CHECK(std::fabs(p.f(w1) - p.f(w2)) <= den / (d + 1) + 1e-12);
      }

      const SineApproximant gamma = sin_approx_network(eps);
      const double kappa =
          std::max(1.0, dims(gamma.network).max_width() * eps * eps * eps);
      const double budget = 640.0 * kappa * kappa * d * d * std::pow(eps, -6.0);
      CHECK(static_cast<double>(param_count(*p.phi_f)) <= budget);
      CHECK(static_cast<double>(param_count(*p.phi_g)) <= budget);
    }
  }
}

TEST_CASE("theorem conditions hold for the sine example") {
  const Problem p = make_sine_problem(2, 1.0, 0.1);
  const ConditionReport rep = check_theorem_conditions(p, 2.0, 1.5, 2.0);
  CHECK(rep.c == 2.0);
  CHECK(rep.q == 1.5);
  CHECK(rep.beta == 2.0);
  REQUIRE(rep.checks.size() == 6);
  for (const char* name : {"growth", "nonlinearity-lipschitz", "terminal-lipschitz",
                           "nonlinearity-approx", "terminal-approx", "parameter-budget"}) {
    const ConditionCheck& chk = find_check(rep, name);
    CHECK(chk.applicable);
    CHECK(chk.ok);
    CHECK(chk.max_ratio <= 1.0);
  }
  CHECK(rep.all_ok);

  CHECK_THROWS_AS(check_theorem_conditions(p, 2.0, 1.5, 2.0, 0), ArgumentError);
  CHECK_THROWS_AS(check_theorem_conditions(p, 0.0, 1.5, 2.0), ArgumentError);
}

TEST_CASE("growth audit flags an unbounded terminal function") {
  const Problem tr = make_transport_problem(2, 1.0);
  const ConditionReport ok = check_theorem_conditions(tr, 2.0, 1.5, 2.0);
  CHECK(find_check(ok, "growth").ok);
  CHECK(find_check(ok, "nonlinearity-lipschitz").ok);

  const Problem quad = make_linear_heat_problem(2, 1.0, LinearHeatVariant::kQuadratic);
  const ConditionReport bad = check_theorem_conditions(quad, 2.0, 1.5, 0.0);
  const ConditionCheck& growth = find_check(bad, "growth");
  CHECK(growth.applicable);
  CHECK_FALSE(growth.ok);
  CHECK(growth.max_ratio > 1.0);
  CHECK_FALSE(bad.all_ok);
}

TEST_CASE("smallest passing constant sits on the scan grid") {
  const Problem p = make_sine_problem(2, 1.0, 0.1);
  const std::optional<double> c = smallest_passing_c(p, 1.5, 2.0);
  REQUIRE(c.has_value());
  CHECK(*c >= 0.5);
  CHECK(*c <= 2.0 + 1e-12);
  const double steps = (*c - 0.5) / 0.25;
  CHECK(std::fabs(steps - std::round(steps)) <= 1e-9);
  CHECK(check_theorem_conditions(p, *c, 1.5, 2.0).all_ok);
  if (*c >= 0.75)
    CHECK_FALSE(check_theorem_conditions(p, *c - 0.25, 1.5, 2.0).all_ok);
}
