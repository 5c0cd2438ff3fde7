#include <doctest.h>

#include <cmath>
#include <memory>

#include "cusp/empirics.hpp"
#include "cusp/error.hpp"

using namespace cusp;

namespace {

DomainSpec cantor_cusp(double theta, int d, double sigma, int depth) {
  auto g = std::make_shared<const HSet>(HSet::build(theta, d, depth, HSet::Kind::cantor));
  return DomainSpec::hset_cusp(sigma, g);
}

}  // namespace

TEST_CASE("rate fit examples") {
  std::vector<double> n{4, 16, 64, 256, 1024}, e;
  for (double x : n) e.push_back(1.0 / std::sqrt(x));
  auto f = fit_rate(n, e);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(f.max_residual <= 1e-13);
  CHECK(f.points == 5);

  auto c = fit_rate(n, {2, 2, 2, 2, 2});
  CHECK(std::fabs(c.slope) <= 1e-14);
  CHECK(c.intercept == doctest::Approx(std::log(2.0)));

  // 1/n with a factor alternating between 1 and 1.01.
  std::vector<double> alt;
  for (std::size_t i = 0; i < n.size(); ++i) alt.push_back((i % 2 ? 1.01 : 1.0) / n[i]);
  CHECK(fit_rate(n, alt).slope == doctest::Approx(-1.0).epsilon(0.005));
}

TEST_CASE("rate fit rejects bad input") {
  CHECK_THROWS_AS(fit_rate({1, 2, 3}, {1, 1, 1}), ParameterError);
  CHECK_THROWS_AS(fit_rate({1, 2, 3, 4}, {1, 1, 1}), ParameterError);
  CHECK_THROWS_AS(fit_rate({1, 2, 3, 4}, {1, 0, 1, 1}), DataError);
  CHECK_THROWS_AS(fit_rate({1, 3, 2, 4}, {1, 1, 1, 1}), DataError);
  CHECK_THROWS_AS(fit_rate({0, 1, 2, 3}, {1, 1, 1, 1}), DataError);
}

TEST_CASE("bump profile") {
  CHECK(bump_profile(0.3, 2) == 0.0);
  CHECK(bump_profile(0.5, 2) == 0.0);
  CHECK(bump_profile(1.2, 2) == 1.0);
  CHECK(bump_profile(0.75, 2) == doctest::Approx(0.5));
  CHECK(bump_profile(1.2, 2, 1) == 0.0);
  // Derivatives by central differences.
  for (double t : {0.6, 0.7, 0.9})
    for (int j = 0; j < 3; ++j) {
      double h = 1e-5;
      double fd = (bump_profile(t + h, 3, j) - bump_profile(t - h, 3, j)) / (2 * h);
      CHECK(bump_profile(t, 3, j + 1) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("bump family layout") {
  auto dom = cantor_cusp(1.0, 3, 2.0, 5);
  auto fam = BumpFamily::build(dom, 3, 1);
  CHECK(fam.size() == 64);
  CHECK(fam.b_k() < 2.0);
  CHECK(fam.b_k() > 1.0);
  CHECK_THROWS_AS(BumpFamily::build(dom, 5, 1), ParameterError);
  CHECK_THROWS_AS(BumpFamily::build(dom, 0, 1), ParameterError);
  auto plane = std::make_shared<const HSet>(HSet::build(1.0, 3, 3, HSet::Kind::plane));
  CHECK_THROWS_AS(BumpFamily::build(DomainSpec::hset_cusp(2.0, plane), 1, 1), ConfigError);
}

TEST_CASE("property: 2 - b_k shrinks by m^{-(d-1)/(theta sigma)} per level") {
  for (double theta : {0.5, 1.0, 1.5})
    for (double sigma : {1.0, 2.0, 3.0}) {
      auto dom = cantor_cusp(theta, 3, sigma, 6);
      int m = dom.hset()->m();
      double expect = std::pow(m, -2.0 / (theta * sigma));
      for (int k = 1; k < 5; ++k) {
        double a = 2.0 - BumpFamily::build(dom, k, 1).b_k();
        double b = 2.0 - BumpFamily::build(dom, k + 1, 1).b_k();
        CHECK(b / a == doctest::Approx(expect).epsilon(1e-12));
      }
    }
}

TEST_CASE("property: bumps vanish near the cube boundaries") {
  for (int k = 1; k <= 3; ++k) {
    auto fam = BumpFamily::build(cantor_cusp(1.0, 3, 2.0, 8), k, 2);
    CHECK(fam.max_boundary_psi(9) < fam.b_k());
    CHECK(fam.boundary_derivative_max() <= 1e-8);
  }
}

TEST_CASE("bumps have disjoint supports") {
  auto fam = BumpFamily::build(cantor_cusp(1.0, 3, 2.0, 6), 2, 1);
  for (std::size_t a = 0; a < fam.size(); ++a)
    for (std::size_t b = a + 1; b < fam.size(); ++b) {
      const Box& qa = fam.cube(a);
      const Box& qb = fam.cube(b);
      bool overlap = true;
      for (int i = 0; i < qa.dim; ++i) overlap = overlap && qa.lo[i] < qb.hi[i] && qb.lo[i] < qa.hi[i];
      CHECK_FALSE(overlap);
    }
  Vec x{};
  const Box& q0 = fam.cube(0);
  x[0] = 0.5 * (q0.lo[0] + q0.hi[0]);
  x[1] = 0.5 * (q0.lo[1] + q0.hi[1]);
  x[2] = 1.99999;
  CHECK(fam.eval(0, x) == doctest::Approx(1.0));
  CHECK(fam.eval(1, x) == 0.0);
}

TEST_CASE("layer-cake norms agree with direct quadrature") {
  auto fam = BumpFamily::build(cantor_cusp(1.0, 3, 2.0, 6), 1, 1);
  auto a = bump_norms(fam, 2.0, 2.0);
  auto b = bump_norms_direct(fam, 0, 2.0, 2.0);
  CHECK(b.lq == doctest::Approx(a.lq).epsilon(0.02));
  CHECK(b.grad_lp == doctest::Approx(a.grad_lp).epsilon(0.02));
  CHECK(a.lq <= a.lp * (1 + 1e-12));
  CHECK_THROWS_AS(bump_norms(fam, 2.0, HUGE_VAL), ParameterError);
}

TEST_CASE("norm scaling slopes for theta = 1, sigma = 2, d = 3") {
  auto dom = cantor_cusp(1.0, 3, 2.0, 7);
  auto ns = norm_scaling(dom, 1, 5, 2.0, 2.0, 1);
  CHECK(ns.lq_predicted == doctest::Approx(-2.5));
  CHECK(ns.grad_predicted == doctest::Approx(-1.5));
  CHECK(ns.packing_predicted == doctest::Approx(-0.5));
  CHECK(ns.lq_slope == doctest::Approx(ns.lq_predicted).epsilon(0.1));
  CHECK(ns.grad_slope == doctest::Approx(ns.grad_predicted).epsilon(0.1));
  CHECK(ns.packing_slope == doctest::Approx(ns.packing_predicted).epsilon(0.15));
  CHECK_THROWS_AS(norm_scaling(dom, 1, 3, 2.0, 2.0, 1), ParameterError);
}

TEST_CASE("ellipsoid widths") {
  auto w = ellipsoid_widths({0.25, 1.0, 0.5}, 4);
  REQUIRE(w.size() == 5);
  CHECK(w[0].value == 1.0);
  CHECK(w[1].value == 0.5);
  CHECK(w[2].value == 0.25);
  CHECK(w[3].value == 0.0);
  auto ball = ellipsoid_widths(std::vector<double>(5, 1.0), 5);
  for (int n = 0; n < 5; ++n) CHECK(ball[n].value == 1.0);
  CHECK(ball[5].value == 0.0);
  CHECK_THROWS_AS(ellipsoid_widths({-1.0}, 1), ParameterError);
}

TEST_CASE("interval widths decay like 1/n for r = 1") {
  auto w = interval_widths(1024, 1, 128);
  CHECK(w[0].value == doctest::Approx(1.0));
  std::vector<double> n, e;
  for (int k = 8; k <= 128; k *= 2) {
    n.push_back(k);
    e.push_back(w[k].value);
  }
  CHECK(fit_rate(n, e).slope == doctest::Approx(-1.0).epsilon(0.05));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i].value <= w[i - 1].value);
  CHECK_THROWS_AS(interval_widths(5000, 1, 4), SizeError);
  CHECK_THROWS_AS(interval_widths(1, 1, 4), ParameterError);
}

TEST_CASE("domain widths on a constant domain") {
  auto dom = DomainSpec::constant(2, 2.0, {BoundaryModulus::power(1.0)});
  auto w = domain_widths(dom, 1, 16, 10);
  REQUIRE(w.size() == 11);
  CHECK(w[0].value == doctest::Approx(1.0));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i].value <= w[i - 1].value);
  CHECK_THROWS_AS(domain_widths(dom, 1, 64, 4), SizeError);
}
