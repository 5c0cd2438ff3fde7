#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "cusp/error.hpp"
#include "cusp/geometry.hpp"

using namespace cusp;

TEST_CASE("modulus evaluation") {
  CHECK(BoundaryModulus::power(2.0).eval(0.5) == 0.25);
  CHECK(BoundaryModulus::power(1.0).eval(0.3) == doctest::Approx(0.3));
  CHECK(BoundaryModulus::power(2.0, 0.3).eval(0.125) == doctest::Approx(0.0046875).epsilon(1e-15));
  CHECK_THROWS_AS(BoundaryModulus::power(2.0).eval(0.0), DomainError);
  CHECK_THROWS_AS(BoundaryModulus::power(2.0).eval(1.5), DomainError);
  CHECK_THROWS_AS(BoundaryModulus::power(0.5), ParameterError);
  CHECK_THROWS_AS(BoundaryModulus::power(2.0, 1.5), ParameterError);
}

TEST_CASE("property: modulus doubling and linear bounds on a dyadic grid") {
  for (auto m : {BoundaryModulus::power(1.0), BoundaryModulus::power(2.5, 0.4), BoundaryModulus::power_log(2.0, 0.5, 1.0)}) {
    REQUIRE(m.a_star >= 1.0);
    double prev = 0.0;
    for (int j = 40; j >= 0; --j) {
      double t = std::ldexp(1.0, -j);
      double v = m.eval(t);
      CHECK(v > 0.0);
      CHECK(v >= prev);
      CHECK(v <= m.a_star * t * (1 + 1e-12));
      if (j >= 1) CHECK(m.eval(2 * t) <= m.a_star * v * (1 + 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("constant domain") {
  auto dom = DomainSpec::constant(2, 2.0, {BoundaryModulus::power(2.0)});
  CHECK(dom.psi({0.3}) == 2.0);
  CHECK(dom.contains({0.5, 1.0}));
  CHECK_FALSE(dom.contains({0.5, 2.0}));
  CHECK_FALSE(dom.contains({0.0, 1.0}));
  CHECK_FALSE(dom.contains({0.5, 0.0}));
  CHECK_THROWS_AS(DomainSpec::constant(2, 2.5, {BoundaryModulus::power(2.0)}), DomainError);
}

TEST_CASE("h-set cusp psi") {
  auto g = std::make_shared<const HSet>(HSet::build(1.0, 3, 2, HSet::Kind::plane));
  auto dom = DomainSpec::hset_cusp(2.0, g);
  // Plane {x2 = 1/2}: distance 0.25 at x2 = 0.75.
  CHECK(dom.psi({0.3, 0.75}) == doctest::Approx(1.5));
  CHECK_FALSE(dom.contains({0.3, 0.75, 1.6}));
  CHECK(dom.contains({0.3, 0.75, 1.4}));
  CHECK(dom.psi({0.3, 0.5}) == 2.0);
  auto dom1 = DomainSpec::hset_cusp(1.0, g);
  CHECK(dom1.psi({0.9, 0.5}) == 2.0);
}

TEST_CASE("property: psi lies in [1, 2] and containment is monotone in x_d") {
  auto g = std::make_shared<const HSet>(HSet::build(0.5, 2, 8, HSet::Kind::cantor));
  auto dom = DomainSpec::hset_cusp(3.0, g);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Vec x{u(rng), 0.0};
    double p = dom.psi(x);
    CHECK(p >= 1.0);
    CHECK(p <= 2.0);
    double s = 2.0 * u(rng);
    if (dom.contains({x[0], s})) CHECK(dom.contains({x[0], s * u(rng)}));
  }
}

TEST_CASE("property: sampled Hoelder compatibility of h-set cusps") {
  for (double sigma : {2.0, 3.0}) {
    auto g = std::make_shared<const HSet>(HSet::build(1.0, 3, 6, HSet::Kind::cantor));
    auto dom = DomainSpec::hset_cusp(sigma, g);
    auto rep = dom.holder_check(10000, 11);
    CHECK(rep.passed);
    CHECK(rep.violations == 0);
    CHECK(dom.moduli()[0].scale >= 1.0 / sigma);
  }
}

TEST_CASE("psi bounds over boxes") {
  auto g = std::make_shared<const HSet>(HSet::build(1.0, 3, 6, HSet::Kind::cantor));
  auto dom = DomainSpec::hset_cusp(2.0, g);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double w = 0.2 * u(rng);
    Box b{2, {u(rng) * (1 - w), u(rng) * (1 - w)}, {}};
    b.hi[0] = b.lo[0] + w;
    b.hi[1] = b.lo[1] + w;
    double lo = dom.psi_inf(b, 1e-9), hi = dom.psi_sup(b);
    for (int s = 0; s < 50; ++s) {
      Vec x{b.lo[0] + w * u(rng), b.lo[1] + w * u(rng)};
      double p = dom.psi(x);
      CHECK(p >= lo - 1e-9);
      CHECK(p <= hi + 1e-12);
    }
    CHECK(hi - lo <= dom.psi_oscillation(b) + 1e-9);
  }
}

TEST_CASE("explicit samples interpolate multilinearly") {
  std::vector<double> vals{1.0, 2.0, 1.5};  // grid 0, 1/2, 1
  auto dom = DomainSpec::explicit_sample(2, 2, vals, {BoundaryModulus::power(1.0)});
  CHECK(dom.psi({0.25}) == doctest::Approx(1.5));
  CHECK(dom.psi({0.75}) == doctest::Approx(1.75));
  CHECK(dom.psi_inf(dom.base_box()) == 1.0);
}

TEST_CASE("domain JSON round trip and unknown keys") {
  auto g = std::make_shared<const HSet>(HSet::build(1.0, 3, 4, HSet::Kind::cantor));
  auto dom = DomainSpec::hset_cusp(2.0, g);
  auto back = DomainSpec::from_json(dom.to_json());
  CHECK(back.dim() == 3);
  CHECK(back.psi({0.1, 0.2}) == doctest::Approx(dom.psi({0.1, 0.2})).epsilon(1e-14));
  CHECK_THROWS_AS(DomainSpec::from_json(R"({"dim":2,"psi":{"kind":"constant"},"colour":1})"), ConfigError);
  CHECK_THROWS_AS(DomainSpec::from_json("not json"), DataError);
  CHECK_THROWS_AS(DomainSpec::from_json(R"({"dim":2,"psi":{"kind":"hset_cusp","sigma":2}})"), ConfigError);
}
