#include <doctest.h>

#include <cmath>

#include "cusp/error.hpp"
#include "cusp/rates.hpp"

using namespace cusp;

namespace {

ParamSet params(const char* p, const char* q, int r, int d, Rational sigma, WidthKind w = WidthKind::entropy) {
  ParamSet ps;
  ps.p = Exponent::parse(p);
  ps.q = Exponent::parse(q);
  ps.r = r;
  ps.d = d;
  ps.sigma = sigma;
  ps.width = w;
  return ps;
}

}  // namespace

TEST_CASE("rational arithmetic is exact and normalized") {
  Rational a(6, -4);
  CHECK(a.num() == -3);
  CHECK(a.den() == 2);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("-0.5e-1") == Rational(-1, 20));
  CHECK(Rational::parse("7/21") == Rational(1, 3));
  CHECK(Rational(3, 8).str() == "3/8");
  CHECK(Rational(4).str() == "4");
  CHECK(Rational::from_double(0.1).to_double() == 0.1);
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational::parse("abc"), Error);
}

TEST_CASE("rational overflow is detected") {
  Rational big(INT64_MAX / 2 + 1);
  CHECK_THROWS_AS(big * Rational(4), Error);
}

TEST_CASE("exponent conjugates and infinity") {
  Exponent inf = Exponent::parse("inf");
  CHECK(inf.is_infinite());
  CHECK(inf.str() == "inf");
  CHECK(Exponent::parse("1").conjugate().is_infinite());
  CHECK(Exponent::parse("3").conjugate().value() == Rational(3, 2));
  CHECK(Exponent::parse("3/2").inv() == Rational(2, 3));
}

TEST_CASE("entropy exponents for the sigma = 3 plane cusp") {
  auto r = entropy_exponents(params("2", "2", 1, 2, 3));
  CHECK(r.alpha1 == Rational(1, 2));
  CHECK(r.alpha2 == Rational(1, 3));
  CHECK(r.j_star == 2);
  CHECK(r.exponent == Rational(-1, 3));
  CHECK(r.tau == TauKind::tau2);
}

TEST_CASE("entropy exponents with q above p") {
  auto r = entropy_exponents(params("2", "4", 3, 2, 2));
  CHECK(r.alpha1 == Rational(3, 2));
  CHECK(r.alpha2 == Rational(11, 8));
  CHECK(r.j_star == 2);
}

TEST_CASE("alpha1 == alpha2 is refused") {
  CHECK_THROWS_AS(entropy_exponents(params("2", "2", 2, 2, 2)), DegenerateError);
  try {
    entropy_exponents(params("2", "2", 2, 2, 2));
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "degenerate: alpha1 == alpha2");
  }
}

TEST_CASE("embedding failure is infeasible") {
  CHECK_THROWS_AS(entropy_exponents(params("2", "100", 1, 2, 8)), InfeasibleError);
  CHECK(embedding_margin(params("2", "100", 1, 2, 8)) == Rational(1) + Rational(9) * Rational(-49, 100));
}

TEST_CASE("kolmogorov widths in the second case") {
  auto r = width_exponents(params("2", "4", 3, 2, 2, WidthKind::kolmogorov));
  REQUIRE(r.thetas.has_value());
  CHECK((*r.thetas)[0] == Rational(3, 2));
  CHECK((*r.thetas)[1] == Rational(5, 2));
  CHECK((*r.thetas)[2] == Rational(11, 8));
  CHECK((*r.thetas)[3] == Rational(9, 4));
  CHECK(r.j_star == 3);
  CHECK(r.rho == Rational(9, 8));
  CHECK(r.exponent == Rational(-11, 8));
  CHECK(r.q_hat->value() == Rational(4));
  CHECK(r.width_case == 2);
}

TEST_CASE("gelfand widths reduce to the first case") {
  auto r = width_exponents(params("2", "3", 2, 2, 3, WidthKind::gelfand));
  CHECK(r.q_hat->value() == Rational(2));
  CHECK(r.width_case == 1);
  CHECK(r.alpha2 == Rational(11, 18));
  CHECK(r.alpha1 == Rational(1));
  CHECK(r.exponent == Rational(-4, 9));
}

TEST_CASE("linear widths with p = q") {
  auto r = width_exponents(params("2", "2", 1, 2, 3, WidthKind::linear));
  CHECK(r.width_case == 1);
  CHECK(r.exponent == Rational(-1, 3));
}

TEST_CASE("q_hat convention") {
  auto p = Exponent::parse("3/2"), q = Exponent::parse("4");
  CHECK(q_hat(WidthKind::kolmogorov, p, q)->value() == Rational(4));
  CHECK(q_hat(WidthKind::linear, p, q)->value() == Rational(3));
  CHECK(q_hat(WidthKind::gelfand, p, q)->value() == Rational(3));
  CHECK(!q_hat(WidthKind::entropy, p, q).has_value());
}

TEST_CASE("widths reject infinite q and p = 1") {
  CHECK_THROWS_AS(width_exponents(params("2", "inf", 1, 2, 1, WidthKind::kolmogorov)), InfeasibleError);
  CHECK_THROWS_AS(width_exponents(params("1", "2", 1, 2, 1, WidthKind::kolmogorov)), InfeasibleError);
}

TEST_CASE("h-set exponents, general set") {
  auto ps = params("2", "2", 2, 3, 2);
  ps.theta = Rational(1);
  auto h = hset_exponents(ps, HSetVariant::general);
  CHECK(h.hset.rho == Rational(1));
  CHECK(h.hset.alpha2 == Rational(1));
  CHECK(h.hset.alpha1 == Rational(2, 3));
  CHECK(h.hset.j_star == 1);
  CHECK(h.hset.exponent == Rational(-2, 3));
  REQUIRE(h.generic.has_value());
  CHECK(h.generic->rho == (Rational(2) / Rational(4)));
}

TEST_CASE("h-set exponents, coordinate plane beats the general bound") {
  auto ps = params("2", "4", 2, 3, 2);
  ps.theta = Rational(1);
  auto plane = hset_exponents(ps, HSetVariant::plane);
  auto general = hset_exponents(ps, HSetVariant::general);
  CHECK(plane.hset.rho == Rational(1));
  CHECK(general.hset.rho == Rational(3, 8));
  CHECK(general.hset.rho < plane.hset.rho);
}

TEST_CASE("h-set parameter checks") {
  auto ps = params("2", "2", 2, 3, 2);
  CHECK_THROWS_AS(hset_exponents(ps, HSetVariant::general), ParameterError);
  ps.theta = Rational(2);
  CHECK_THROWS_AS(hset_exponents(ps, HSetVariant::plane), ParameterError);
  ps.theta = Rational(3);
  CHECK_THROWS_AS(hset_exponents(ps, HSetVariant::general), ParameterError);
}

TEST_CASE("property: generic h-set substitution matches theta = d - 1") {
  // With theta = d - 1 the h-set scale coincides with the generic one.
  for (int d = 2; d <= 4; ++d)
    for (int r = 1; r <= 3; ++r)
      for (int s = 1; s <= 4; ++s) {
        auto ps = params("2", "3", r, d, s);
        ps.theta = Rational(d - 1);
        if (!embedding_margin(ps).positive()) continue;
        Rational generic = (Rational(r) + Rational(s * (d - 1) + 1) * (Rational(1, 3) - Rational(1, 2))) /
                           Rational(s * (d - 1));
        try {
          CHECK(hset_exponents(ps, HSetVariant::general).hset.rho == generic);
        } catch (const DegenerateError&) {
        }
      }
}

TEST_CASE("property: j_star picks the smaller exponent") {
  for (int r = 1; r <= 4; ++r)
    for (int s = 1; s <= 5; ++s)
      for (int d = 2; d <= 4; ++d) {
        auto ps = params("2", "2", r, d, s);
        try {
          auto e = entropy_exponents(ps);
          CHECK(-e.exponent == min(e.alpha1, e.alpha2));
        } catch (const DegenerateError&) {
          CHECK(Rational(r, d) == Rational(r, s * (d - 1)));
        }
      }
}

TEST_CASE("solve_scale") {
  CHECK(solve_scale(2.0, [](double) { return 1.0; }, 16.0) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(solve_scale(1.0, [](double) { return 1.0; }, 123.5) == doctest::Approx(123.5).epsilon(1e-10));
  auto u = [](double t) { return 1.0 / std::log(std::exp(1.0) * t); };
  double t = solve_scale(2.0, u, 100.0);
  // Frozen from an independent 40-digit root finder.
  CHECK(t == doctest::Approx(19.98780171285278).epsilon(1e-9));
  CHECK(std::fabs(t * t * u(t) - 100.0) <= 1e-10 * 100.0);
  CHECK_THROWS_AS(solve_scale(2.0, [](double) { return 1.0; }, 0.5), RangeError);
  CHECK_THROWS_AS(solve_scale(-1.0, [](double) { return 1.0; }, 10.0), ParameterError);
}

TEST_CASE("tau factors") {
  auto ps = params("2", "2", 1, 3, 1);
  for (double n : {2.0, 64.0, 1e6}) CHECK(tau_factor(ps, n, TauKind::tau2) == doctest::Approx(1.0).epsilon(1e-9));
  ps.lambda = SlowVariation::parse("logpow:1");
  double tau = tau_factor(ps, std::ldexp(1.0, 20), TauKind::tau2);
  // Frozen: t(2^20) = 3077.4310075812553, phi = 3.0053037183410697, tau = 1/phi.
  CHECK(tau == doctest::Approx(0.33274507128750398).epsilon(1e-8));
  double t = solve_scale(2.0, [&](double x) { return ps.lambda.psi(x); }, std::ldexp(1.0, 20));
  CHECK(t * t * ps.lambda.psi(t) == doctest::Approx(std::ldexp(1.0, 20)).epsilon(1e-8));
  CHECK(tau_factor(ps, 100.0, TauKind::tau1) == 1.0);
  CHECK_THROWS_AS(tau_factor(ps, 1.0, TauKind::tau2), ParameterError);
}

TEST_CASE("slow variation parsing") {
  CHECK(SlowVariation::parse("const").str() == "const");
  CHECK(SlowVariation::parse("logpow:2").str() == "logpow:2");
  CHECK(SlowVariation::parse("logpow:1").lambda(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(SlowVariation::parse("exp"), ParameterError);
  CHECK(parse_width_kind("gelfand") == WidthKind::gelfand);
  CHECK_THROWS_AS(parse_width_kind("bernstein"), ParameterError);
}
