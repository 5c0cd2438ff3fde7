#include <doctest.h>

#include <cmath>
#include <random>

#include "cusp/error.hpp"
#include "cusp/hset.hpp"

using namespace cusp;

TEST_CASE("cantor construction, theta = 1 in d = 3") {
  auto g = HSet::build(1.0, 3, 3, HSet::Kind::cantor);
  CHECK(g.m() == 2);
  CHECK(g.lambda() == 0.25);
  CHECK(g.cell_count(3) == 64);
  auto cells = g.cells(3);
  REQUIRE(cells.size() == 64);
  for (const auto& c : cells) CHECK(c.halfwidth == doctest::Approx(0.5 * std::pow(0.25, 3)));
  // h(lambda^k) m^{(d-1)k} = 1
  for (int k = 0; k <= 3; ++k) CHECK(g.h(std::pow(g.lambda(), k)) * std::pow(4.0, k) == doctest::Approx(1.0));
}

TEST_CASE("cantor construction, theta = 3/2 in d = 3") {
  auto g = HSet::build(1.5, 3, 2, HSet::Kind::cantor);
  CHECK(g.m() == 2);
  CHECK(g.lambda() == doctest::Approx(0.3968502629920499).epsilon(1e-14));
  CHECK(g.lambda() * g.m() < 1.0);
  CHECK(g.cell_count(2) == 16);
}

TEST_CASE("parameter range") {
  CHECK_THROWS_AS(HSet::build(2.0, 3, 3, HSet::Kind::plane), ParameterError);
  CHECK_THROWS_AS(HSet::build(2.0, 3, 3, HSet::Kind::cantor), ParameterError);
  CHECK_THROWS_AS(HSet::build(2.5, 3, 3, HSet::Kind::cantor), ParameterError);
  CHECK_THROWS_AS(HSet::build(1.0, 3, 0, HSet::Kind::cantor), ParameterError);
  CHECK_NOTHROW(HSet::build(1.0, 4, 2, HSet::Kind::plane));
}

TEST_CASE("property: masses sum to one and cells nest") {
  for (double theta : {0.5, 1.0, 1.5}) {
    auto g = HSet::build(theta, 3, 4, HSet::Kind::cantor);
    for (int k = 0; k <= 4; ++k) {
      double total = 0.0;
      for (const auto& c : g.cells(k)) total += c.mass;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
    int per = g.m() * g.m();
    for (int k = 0; k < 4; ++k) {
      auto parents = g.cells(k);
      auto kids = g.cells(k + 1);
      for (std::size_t j = 0; j < kids.size(); ++j) {
        const auto& c = kids[j];
        const auto& p = parents[j / per];
        for (int i = 0; i < 2; ++i) {
          CHECK(c.center[i] - c.halfwidth >= p.center[i] - p.halfwidth - 1e-15);
          CHECK(c.center[i] + c.halfwidth <= p.center[i] + p.halfwidth + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("distances") {
  auto plane = HSet::build(1.0, 3, 1, HSet::Kind::plane);
  CHECK(plane.distance({0.3, 0.9}) == doctest::Approx(0.4));

  auto g = HSet::build(1.0, 3, 12, HSet::Kind::cantor);
  for (std::uint64_t j : {0ull, 5ull, 1000ull}) {
    auto c = g.cell(12, j);
    CHECK(g.distance(c.center) <= g.tolerance());
  }
  // Level-1 cells are centred at 1/4 and 3/4 with halfwidth h = 1/8. Inside a cell the set reaches
  // c + h/2 + h/8 + ... = c + 2h/3, so its largest coordinate below 1/2 is 1/3 and the distance is 1/6.
  CHECK(std::fabs(g.distance({0.5, 0.5}) - 1.0 / 6.0) <= 2 * g.tolerance());
}

TEST_CASE("property: distance is 1-Lipschitz in l-infinity") {
  auto g = HSet::build(1.0, 3, 8, HSet::Kind::cantor);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Vec x{u(rng), u(rng)}, y{u(rng), u(rng)};
    double dxy = std::max(std::fabs(x[0] - y[0]), std::fabs(x[1] - y[1]));
    CHECK(std::fabs(g.distance(x) - g.distance(y)) <= dxy + 1e-12);
  }
}

TEST_CASE("regularity: cantor depth 6 ratios are bounded by 8") {
  auto g = HSet::build(1.0, 3, 6, HSet::Kind::cantor);
  std::vector<double> ts;
  for (int j = 1; j <= 6; ++j) ts.push_back(std::ldexp(1.0, -j));
  auto rep = g.regularity_check(1000, ts, 12345);
  CHECK(rep.ratio_max <= 8.0);
  CHECK(rep.ratio_min > 0.0);
  CHECK(rep.passed);
}

TEST_CASE("regularity: plane ratios lie in [1, 2]") {
  auto g = HSet::build(1.0, 3, 1, HSet::Kind::plane);
  std::vector<double> ts{0.25, 0.125, 0.0625};
  auto rep = g.regularity_check(500, ts, 1);
  CHECK(rep.ratio_min >= 1.0 - 1e-12);
  CHECK(rep.ratio_max <= 2.0 + 1e-12);
}

TEST_CASE("ball mass of the whole cube") {
  auto g = HSet::build(1.0, 3, 5, HSet::Kind::cantor);
  CHECK(g.ball_mass({0.5, 0.5}, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(g.regularity_check(10, {1.5}, 1), ParameterError);
}

TEST_CASE("brute-force ball mass agrees with the cell sum") {
  auto g = HSet::build(1.0, 3, 5, HSet::Kind::cantor);
  auto cells = g.cells(5);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Vec x{u(rng), u(rng)};
    double t = 0.5 * u(rng);
    double brute = 0.0;
    for (const auto& c : cells) {
      bool meets = true;
      for (int a = 0; a < 2; ++a)
        meets = meets && std::fabs(c.center[a] - x[a]) < t + c.halfwidth;
      if (meets) brute += c.mass;
    }
    CHECK(g.ball_mass(x, t) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("grid counts near the set") {
  auto g = HSet::build(1.0, 3, 10, HSet::Kind::cantor);
  // brute force over the 2^-4 grid
  int n = 4;
  double h = std::ldexp(1.0, -n), s = h;
  std::uint64_t brute = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Box b{2, {i * h, j * h}, {(i + 1) * h, (j + 1) * h}};
      if (g.box_distance(b) <= s) ++brute;
    }
  CHECK(g.count_grid_cells_within(n, s) == brute);
}

TEST_CASE("json round trip") {
  auto g = HSet::build(0.5, 2, 7, HSet::Kind::cantor);
  auto back = HSet::from_json(g.to_json());
  CHECK(back.m() == g.m());
  CHECK(back.lambda() == g.lambda());
  CHECK(back.depth() == 7);
  CHECK(back.distance({0.3}) == g.distance({0.3}));
}
