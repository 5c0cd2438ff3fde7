#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cusp/error.hpp"
#include "cusp/tree_summation.hpp"

using namespace cusp;

namespace {

WeightedTree dyadic_chain(std::size_t n, double p = 2.0, double q = 2.0) {
  std::vector<double> g(n, 1.0), v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::ldexp(1.0, -static_cast<int>(i));
  auto wt = chain_tree(n, g, v);
  wt.p = p;
  wt.q = q;
  return wt;
}

double lp(const std::vector<double>& x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::fabs(v), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

TEST_CASE("apply sums along the root path") {
  WeightedTree wt;
  wt.parent = {-1, 0, 0, 1};
  wt.g = {1.0, 2.0, 3.0, 4.0};
  wt.v = {1.0, 0.5, 0.25, 0.125};
  auto out = apply(wt, {1.0, 1.0, 1.0, 1.0});
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 1.5);
  CHECK(out[2] == 1.0);
  CHECK(out[3] == 0.875);
  CHECK_THROWS_AS(apply(wt, {1.0}), ParameterError);
}

TEST_CASE("property: apply is linear") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    auto wt = random_geometric_tree(10, 1.0, 2.0, 2.0, rng);
    std::vector<double> f(10), h(10), sum(10);
    for (int i = 0; i < 10; ++i) {
      f[i] = z(rng);
      h[i] = z(rng);
      sum[i] = 2.0 * f[i] - 3.0 * h[i];
    }
    auto a = apply(wt, f), b = apply(wt, h), c = apply(wt, sum);
    for (int i = 0; i < 10; ++i) CHECK(c[i] == doctest::Approx(2.0 * a[i] - 3.0 * b[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("tree validation") {
  WeightedTree wt;
  wt.parent = {-1, 2, 1};
  wt.g = {1, 1, 1};
  wt.v = {1, 1, 1};
  CHECK_THROWS_AS(wt.validate(), ParameterError);
  wt.parent = {-1, -1, 0};
  CHECK_THROWS_AS(wt.validate(), ParameterError);
  wt.parent = {-1, 0, 5};
  CHECK_THROWS_AS(wt.validate(), ParameterError);
  wt.parent = {-1, 0, 1};
  wt.v[1] = -1.0;
  CHECK_THROWS_AS(wt.validate(), ParameterError);
}

TEST_CASE("decay condition") {
  auto wt = dyadic_chain(6);
  // v^2 halves twice per level: 4^{-j} <= b 2^{-aj} holds for a <= 2 with b = 1.
  CHECK(decay_check(wt, 2.0, 1.0));
  CHECK_FALSE(decay_check(wt, 2.5, 1.0));
  WeightedTree star;
  star.parent = {-1, 0, 0, 0};
  star.g = {1, 1, 1, 1};
  star.v = {1, 0.5, 0.5, 0.5};
  // Three children with v^2 = 1/4 give 3/4 at depth one.
  CHECK(decay_check(star, 0.4, 1.0));
  CHECK_FALSE(decay_check(star, 0.5, 1.0));
  star.q = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(decay_check(star, 1.0, 1.0), PreconditionError);
}

TEST_CASE("operator norm examples") {
  const double inf = std::numeric_limits<double>::infinity();
  WeightedTree one = chain_tree(1, {1.0}, {1.0});
  CHECK(operator_norm(one, NormMethod::spectral).value == doctest::Approx(1.0));
  CHECK(operator_norm(one, NormMethod::ascent).value == doctest::Approx(1.0));

  // p = q = inf: the largest row sum v_i (i + 1) = (i + 1) 2^{-i}, attained at i = 0 and 1.
  auto c10 = dyadic_chain(10, inf, inf);
  auto e = operator_norm(c10, NormMethod::ascent);
  CHECK(e.exact);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-14));

  // p = 1: the largest column norm, here column 0 with ||v||_q.
  auto c4 = dyadic_chain(4, 1.0, 2.0);
  CHECK(operator_norm(c4, NormMethod::ascent).value == doctest::Approx(std::sqrt(1.0 + 0.25 + 1.0 / 16 + 1.0 / 64)));

  // Frozen from an independent SVD of the 5 x 5 path matrix.
  auto c5 = dyadic_chain(5);
  double spec = operator_norm(c5, NormMethod::spectral).value;
  CHECK(spec == doctest::Approx(1.2001805113886586).epsilon(1e-13));
  CHECK(operator_norm(c5, NormMethod::ascent).value == doctest::Approx(spec).epsilon(1e-8));
  CHECK(operator_norm(c5, NormMethod::exhaustive).value == doctest::Approx(spec).epsilon(1e-8));

  CHECK_THROWS_AS(operator_norm(c4, NormMethod::spectral), ParameterError);
  auto bad = dyadic_chain(3, 3.0, 2.0);
  CHECK_THROWS_AS(operator_norm(bad, NormMethod::ascent), ParameterError);
  CHECK_THROWS_AS(parse_norm_method("magic"), ParameterError);
  CHECK(parse_norm_method("ascent") == NormMethod::ascent);
}

TEST_CASE("property: the witness realizes the reported lower bound") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto wt = random_geometric_tree(8, 1.0, 1.5, 3.0, rng);
    auto e = operator_norm(wt, NormMethod::ascent);
    double ratio = lp(apply(wt, e.witness), wt.q) / lp(e.witness, wt.p);
    CHECK(ratio == doctest::Approx(e.lower_bound).epsilon(1e-10));
    CHECK(e.value >= e.lower_bound - 1e-12);
  }
}

TEST_CASE("property: the norm is homogeneous and monotone in the weights") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto wt = random_geometric_tree(9, 1.0, 2.0, 2.0, rng);
    double base = operator_norm(wt, NormMethod::spectral).value;
    auto scaled = wt;
    for (auto& v : scaled.v) v *= 3.0;
    CHECK(operator_norm(scaled, NormMethod::spectral).value == doctest::Approx(3.0 * base).epsilon(1e-12));
    auto bigger = wt;
    for (auto& g : bigger.g) g *= 1.5;
    bigger.g[0] *= 2.0;
    CHECK(operator_norm(bigger, NormMethod::spectral).value >= base * (1 - 1e-12));
  }
}

TEST_CASE("property: random geometric trees satisfy the decay condition and the bound") {
  std::mt19937_64 rng(12345);
  for (int t = 0; t < 50; ++t) {
    auto wt = random_geometric_tree(2 + t % 11, 1.0, 2.0, 2.0, rng);
    CHECK(decay_check(wt, 1.0, 1.0));
    auto rep = bound_check(wt, 1.0, 1.0);
    CHECK_FALSE(rep.violated);
    CHECK(rep.ratio <= 64.0);
  }
}

TEST_CASE("bound check refuses trees without decay") {
  WeightedTree wt = chain_tree(4, {1, 1, 1, 1}, {1, 1, 1, 1});
  CHECK_THROWS_AS(bound_check(wt, 1.0, 1.0), PreconditionError);
  auto rev = dyadic_chain(4, 3.0, 2.0);
  CHECK_THROWS_AS(bound_check(rev, 1.0, 1.0), PreconditionError);
}

TEST_CASE("tree JSON round trip and rejects") {
  std::mt19937_64 rng(1);
  auto wt = random_geometric_tree(7, 1.0, 1.5, 2.5, rng);
  auto back = WeightedTree::from_json(wt.to_json());
  CHECK(back.parent == wt.parent);
  CHECK(back.g == wt.g);
  CHECK(back.v == wt.v);
  CHECK(back.p == wt.p);
  CHECK(back.q == wt.q);
  CHECK_THROWS_AS(WeightedTree::from_json("{"), DataError);
  CHECK_THROWS_AS(WeightedTree::from_json(R"({"parents":[-1],"g":[1],"v":[1],"colour":2})"), DataError);
  CHECK_THROWS_AS(WeightedTree::from_json(R"({"parents":[-1,0],"g":[1],"v":[1,1]})"), ParameterError);
}
