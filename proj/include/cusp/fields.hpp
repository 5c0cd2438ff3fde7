#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "cusp/geometry.hpp"
#include "cusp/types.hpp"

namespace cusp {

using MultiIndex = std::array<int, kMaxDim>;

// Black-box field f on a d-dimensional domain, optionally with partial derivatives.
struct FieldOracle {
  std::string name;
  int dim = 2;
  std::function<double(const Vec&)> value;
  std::function<double(const MultiIndex&, const Vec&)> derivative;  // empty if unavailable
  int smoothness = 1;                     // r for which derivative() is valid
  std::optional<double> gradient_bound;   // certified ||grad^r f||_p when known
  int polynomial_degree = -1;             // max coordinate degree if f is a polynomial, else -1

  double operator()(const Vec& x) const { return value(x); }
  bool has_derivative() const { return static_cast<bool>(derivative); }
};

FieldOracle constant_field(int d, double c);
// f(x) = x_axis
FieldOracle coordinate_field(int d, int axis);
// Monomial c * prod x_i^{e_i}.
FieldOracle monomial_field(int d, const MultiIndex& exponents, double coef = 1.0);
// Sum of monomials; exponents per term.
FieldOracle polynomial_field(int d, std::vector<MultiIndex> exponents, std::vector<double> coefs);
// prod_i sin(w_i x_i + phase_i).
FieldOracle sine_product_field(int d, const Vec& freq, const Vec& phase);
// g(x_d) with g the degree-(2s+1) smoothstep from 0 at x_d = a to `scale` at x_d = b.
FieldOracle smoothstep_field(int d, double a, double b, int s = 2, double scale = 1.0);

// max over |alpha| = r of ||d^alpha f||_{L_p(Omega)} by column quadrature over the whole domain.
double sobolev_seminorm(const FieldOracle& f, const DomainSpec& dom, int r, double p, int order = 8, int panels = 16);
// Rescales f so that its order-r seminorm on the domain is 1; records the bound.
FieldOracle normalized(const FieldOracle& f, const DomainSpec& dom, int r, double p);

// Named fields for the command line: const:C, x<i>, sinprod, smoothstep, cusp_profile, or a JSON polynomial file.
FieldOracle field_by_name(const std::string& spec, const DomainSpec& dom, int r, double p);

}  // namespace cusp
