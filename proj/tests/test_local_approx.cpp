#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "cusp/error.hpp"
#include "cusp/local_approx.hpp"
#include "cusp/quadrature.hpp"

using namespace cusp;

namespace {

Box unit_box(int d) {
  Box b;
  b.dim = d;
  for (int i = 0; i < d; ++i) {
    b.lo[i] = 0.0;
    b.hi[i] = 1.0;
  }
  return b;
}

Box random_box(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Box b;
  b.dim = d;
  for (int i = 0; i < d; ++i) {
    double w = 0.05 + 0.5 * u(rng);
    b.lo[i] = u(rng) * (1.0 - w);
    b.hi[i] = b.lo[i] + w;
  }
  return b;
}

std::shared_ptr<const DomainSpec> cantor_cusp(double theta, int d, double sigma, int depth) {
  auto g = std::make_shared<const HSet>(HSet::build(theta, d, depth, HSet::Kind::cantor));
  return std::make_shared<const DomainSpec>(DomainSpec::hset_cusp(sigma, g));
}

}  // namespace

TEST_CASE("gauss rule and legendre basis") {
  const auto& g = gauss_legendre(6);
  double s = 0.0, m = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    s += g.w[i];
    m += g.w[i] * std::pow(g.x[i], 11);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m == doctest::Approx(1.0 / 12).epsilon(1e-13));
}

TEST_CASE("property: basis is orthonormal on the unit cube") {
  for (int d = 1; d <= 3; ++d)
    for (int r = 1; r <= 4; ++r) {
      PolyBasis basis(r, d);
      std::size_t n = basis.size();
      CHECK(n == static_cast<std::size_t>(std::pow(r, d)));
      std::vector<double> gram(n * n, 0.0), vals(n);
      const auto& g = gauss_legendre(r + 1);
      std::size_t pts = 1;
      for (int i = 0; i < d; ++i) pts *= g.x.size();
      for (std::size_t flat = 0; flat < pts; ++flat) {
        Vec u{};
        double w = 1.0;
        std::size_t rest = flat;
        for (int i = 0; i < d; ++i) {
          std::size_t t = rest % g.x.size();
          rest /= g.x.size();
          u[i] = g.x[t];
          w *= g.w[t];
        }
        basis.eval(u, vals.data());
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) gram[a * n + b] += w * vals[a] * vals[b];
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) CHECK(gram[a * n + b] == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("property: projection reproduces Q_{r-1} on random boxes") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> deg(0, 3);
  std::normal_distribution<double> coef(0.0, 1.0);
  for (int d = 1; d <= 3; ++d)
    for (int r = 1; r <= 4; ++r)
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<MultiIndex> ex;
        std::vector<double> cs;
        for (int t = 0; t < 3; ++t) {
          MultiIndex e{};
          for (int i = 0; i < d; ++i) e[i] = deg(rng) % r;
          ex.push_back(e);
          cs.push_back(coef(rng));
        }
        FieldOracle f = polynomial_field(d, ex, cs);
        Box b = random_box(d, rng);
        auto c = project_box(f, b, r);
        CHECK(cell_error(f, c, b, r, 2.0).value <= 1e-11);
        CHECK(cell_error(f, c, b, r, kInf).value <= 1e-11);
      }
}

TEST_CASE("residual of x_d on the unit cube") {
  for (int d = 1; d <= 3; ++d) {
    FieldOracle f = coordinate_field(d, d - 1);
    Box b = unit_box(d);
    auto c = project_box(f, b, 1);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cell_error(f, c, b, 1, 2.0).value == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-12));
    CHECK(cell_error(f, c, b, 1, kInf).value == doctest::Approx(0.5).epsilon(1e-12));
    // |x_d - 1/2| has a kink, so the q = 1 value is a quadrature estimate.
    auto e1 = cell_error(f, c, b, 1, 1.0);
    CHECK(e1.estimated);
    CHECK(e1.value == doctest::Approx(0.25).epsilon(0.02));
  }
}

TEST_CASE("lq norms over box lists") {
  Box half = unit_box(2);
  half.hi[1] = 0.5;
  CHECK(lq_norm(constant_field(2, 1.0), {half}, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK(lq_norm(constant_field(2, 1.0), {half}, kInf) == 1.0);
  CHECK(lq_norm(coordinate_field(2, 0), {unit_box(2)}, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
  Box other = unit_box(2);
  other.lo[1] = 0.5;
  CHECK(lq_norm(constant_field(2, 1.0), {half, other}, 2.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("property: projection is idempotent and optimal in L2") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  FieldOracle f = sine_product_field(2, {3.0, 5.0}, {0.1, 0.7});
  for (int r = 1; r <= 3; ++r) {
    Box b = random_box(2, rng);
    auto c = project_box(f, b, r);
    PolyBasis basis(r, 2);
    FieldOracle p;
    p.name = "projection";
    p.dim = 2;
    p.value = [&](const Vec& x) { return eval_poly(basis, b, c, x); };
    p.polynomial_degree = r - 1;
    auto c2 = project_box(p, b, r);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c2[i] == doctest::Approx(c[i]).epsilon(1e-11));
    double best = cell_error(f, c, b, r, 2.0).value;
    for (int t = 0; t < 10; ++t) {
      auto other = c;
      for (auto& v : other) v += 0.05 * z(rng);
      CHECK(cell_error(f, other, b, r, 2.0).value >= best);
    }
  }
}

TEST_CASE("property: squared errors add over a split box") {
  FieldOracle f = sine_product_field(2, {4.0, 2.0}, {0.0, 0.3});
  Box b = unit_box(2);
  Box left = b, right = b;
  left.hi[0] = right.lo[0] = 0.5;
  // The constant on each half is the mean over that half, so the q = 2 errors of the halves combine in l2.
  auto cl = project_box(f, left, 1), cr = project_box(f, right, 1);
  double el = cell_error(f, cl, left, 1, 2.0).value, er = cell_error(f, cr, right, 1, 2.0).value;
  PiecewisePoly pp(std::make_shared<const DomainSpec>(DomainSpec::constant(2, 2.0, {BoundaryModulus::power(1.0)})), 1);
  pp.add(Region{false, left}, cl);
  pp.add(Region{false, right}, cr);
  FieldOracle diff;
  diff.dim = 2;
  diff.value = [&](const Vec& x) { return f(x) - pp.eval(x); };
  QuadOptions opt;
  opt.order = 16;
  double whole = lq_norm(diff, {left, right}, 2.0, opt);
  CHECK(whole == doctest::Approx(std::sqrt(el * el + er * er)).epsilon(1e-8));
  CHECK(std::isnan(pp.eval({0.5, 1.9 + 0.2})));
}

TEST_CASE("adaptive approximation: one piece is the plain projection") {
  auto dom = std::make_shared<const DomainSpec>(DomainSpec::constant(2, 2.0, {BoundaryModulus::power(1.0)}));
  FieldOracle f = coordinate_field(2, 1);
  auto res = adaptive_approximate(f, dom, 1);
  CHECK(res.pieces == 1);
  // x_2 on [0,1] x [0,2]: deviation from the mean 1 has L2 norm sqrt(2 * 1/3).
  CHECK(res.error == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
  CHECK_THROWS_AS(adaptive_approximate(f, dom, 0), ParameterError);
}

TEST_CASE("adaptive approximation: error never increases with the budget") {
  auto dom = cantor_cusp(0.5, 2, 3.0, 12);
  FieldOracle f = field_by_name("cusp_profile", *dom, 1, 2.0);
  AdaptiveOptions opt;
  // Column errors are quadrature estimates; at the default psi_tol they wobble by a few parts in 10^3.
  opt.quad.psi_tol = 1e-5;
  opt.record = {2, 4, 8, 16, 32, 64};
  auto res = adaptive_approximate(f, dom, 128, opt);
  REQUIRE(res.trace.size() == 7);
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].pieces <= res.trace[i].budget);
    CHECK(res.trace[i].error <= res.trace[i - 1].error * (1 + 1e-9));
  }
  CHECK(res.trace.back().budget == 128);
  CHECK(res.trace.back().fringe_defect <= res.trace.back().error);
}

TEST_CASE("adaptive approximation is exact for polynomials of low degree") {
  auto dom = cantor_cusp(0.5, 2, 3.0, 10);
  FieldOracle f = polynomial_field(2, {MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{1, 1}}, {1.0, -2.0, 0.5});
  AdaptiveOptions opt;
  opt.r = 2;
  auto res = adaptive_approximate(f, dom, 16, opt);
  CHECK(res.error <= 1e-10);
}

TEST_CASE("local error ratio stays bounded along the levels") {
  auto g = std::make_shared<const HSet>(HSet::build(0.5, 2, 12, HSet::Kind::cantor));
  DomainSpec dom = DomainSpec::hset_cusp(3.0, g);
  FieldOracle f = field_by_name("cusp_profile", dom, 1, 2.0);
  auto rep = local_ratio_check(f, dom, 1, 2.0, 2.0, 5, 3, 12345);
  REQUIRE(!rep.samples.empty());
  CHECK(rep.ratio_max < 10.0);
  CHECK(rep.ratio_max_per_level.size() == 6);
  for (const auto& s : rep.samples) CHECK(s.error >= 0.0);
  CHECK_THROWS_AS(local_ratio_check(f, dom, 1, 4.0, 2.0, 3, 1, 1), ParameterError);
}
