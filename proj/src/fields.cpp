#include "cusp/fields.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cusp/error.hpp"
#include "cusp/local_approx.hpp"
#include "json.hpp"

namespace cusp {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) throw ParameterError("dimension must be in 1..4");
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Coefficients of the smoothstep polynomial of degree 2s+1 in increasing powers.
std::vector<double> smoothstep_coeffs(int s) {
  std::vector<double> c(2 * s + 2, 0.0);
  for (int n = 0; n <= s; ++n) c[s + 1 + n] = binom(s + n, n) * binom(2 * s + 1, s - n) * ((n % 2) ? -1.0 : 1.0);
  return c;
}

double poly_derivative(const std::vector<double>& c, int m, double t) {
  double s = 0.0, tp = 1.0;
  for (std::size_t j = m; j < c.size(); ++j) {
    double fall = 1.0;
    for (int i = 0; i < m; ++i) fall *= static_cast<double>(j - i);
    s += c[j] * fall * tp;
    tp *= t;
  }
  return s;
}

double monomial_derivative(int d, const MultiIndex& e, const MultiIndex& a, const Vec& x) {
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    if (a[i] > e[i]) return 0.0;
    for (int j = 0; j < a[i]; ++j) v *= e[i] - j;
    v *= std::pow(x[i], e[i] - a[i]);
  }
  return v;
}

}  // namespace

FieldOracle constant_field(int d, double c) {
  check_dim(d);
  FieldOracle f;
  f.name = "const";
  f.dim = d;
  f.value = [c](const Vec&) { return c; };
  f.derivative = [c](const MultiIndex& a, const Vec&) {
    for (int v : a)
      if (v) return 0.0;
    return c;
  };
  f.smoothness = 64;
  f.gradient_bound = 0.0;
  f.polynomial_degree = 0;
  return f;
}

FieldOracle coordinate_field(int d, int axis) {
  check_dim(d);
  if (axis < 0 || axis >= d) throw ParameterError("axis out of range");
  MultiIndex e{};
  e[axis] = 1;
  FieldOracle f = monomial_field(d, e);
  f.name = "x" + std::to_string(axis + 1);
  return f;
}

FieldOracle monomial_field(int d, const MultiIndex& exponents, double coef) {
  return polynomial_field(d, {exponents}, {coef});
}

FieldOracle polynomial_field(int d, std::vector<MultiIndex> exponents, std::vector<double> coefs) {
  check_dim(d);
  if (exponents.size() != coefs.size()) throw ParameterError("terms and coefficients differ in length");
  int deg = 0;
  for (const auto& e : exponents)
    for (int i = 0; i < kMaxDim; ++i) {
      if (e[i] < 0) throw ParameterError("negative exponent");
      if (i >= d && e[i] != 0) throw ParameterError("exponent on a missing axis");
      deg = std::max(deg, e[i]);
    }
  FieldOracle f;
  f.name = "polynomial";
  f.dim = d;
  f.value = [d, exponents, coefs](const Vec& x) {
    double s = 0.0;
    for (std::size_t t = 0; t < coefs.size(); ++t) {
      double v = coefs[t];
      for (int i = 0; i < d; ++i) v *= std::pow(x[i], exponents[t][i]);
      s += v;
    }
    return s;
  };
  f.derivative = [d, exponents, coefs](const MultiIndex& a, const Vec& x) {
    double s = 0.0;
    for (std::size_t t = 0; t < coefs.size(); ++t) s += coefs[t] * monomial_derivative(d, exponents[t], a, x);
    return s;
  };
  f.smoothness = 64;
  f.polynomial_degree = deg;
  return f;
}

FieldOracle sine_product_field(int d, const Vec& freq, const Vec& phase) {
  check_dim(d);
  FieldOracle f;
  f.name = "sinprod";
  f.dim = d;
  f.value = [d, freq, phase](const Vec& x) {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= std::sin(freq[i] * x[i] + phase[i]);
    return v;
  };
  f.derivative = [d, freq, phase](const MultiIndex& a, const Vec& x) {
    double v = 1.0;
    for (int i = 0; i < d; ++i)
      v *= std::pow(freq[i], a[i]) * std::sin(freq[i] * x[i] + phase[i] + a[i] * M_PI / 2.0);
    return v;
  };
  f.smoothness = 64;
  return f;
}

FieldOracle smoothstep_field(int d, double a, double b, int s, double scale) {
  check_dim(d);
  if (!(b > a)) throw ParameterError("smoothstep needs a < b");
  if (s < 0 || s > 8) throw ParameterError("smoothstep order must be in 0..8");
  auto c = smoothstep_coeffs(s);
  FieldOracle f;
  f.name = "smoothstep";
  f.dim = d;
  f.value = [d, a, b, c, scale](const Vec& x) {
    double t = (x[d - 1] - a) / (b - a);
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return scale;
    return scale * poly_derivative(c, 0, t);
  };
  f.derivative = [d, a, b, c, scale](const MultiIndex& al, const Vec& x) {
    for (int i = 0; i < d - 1; ++i)
      if (al[i]) return 0.0;
    int m = al[d - 1];
    double t = (x[d - 1] - a) / (b - a);
    if (m == 0) {
      if (t <= 0.0) return 0.0;
      if (t >= 1.0) return scale;
      return scale * poly_derivative(c, 0, t);
    }
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return scale * poly_derivative(c, m, t) / std::pow(b - a, m);
  };
  f.smoothness = s + 1;
  return f;
}

double sobolev_seminorm(const FieldOracle& f, const DomainSpec& dom, int r, double p, int order, int panels) {
  Region reg;
  reg.column = true;
  Box base = dom.base_box();
  reg.box = base;
  reg.box.dim = dom.dim();
  reg.box.lo[dom.dim() - 1] = 0.0;
  reg.box.hi[dom.dim() - 1] = dom.psi_sup(base);
  QuadOptions opt;
  opt.order = order;
  opt.panels = panels;
  return region_seminorm(f, &dom, reg, r, p, opt);
}

FieldOracle normalized(const FieldOracle& f, const DomainSpec& dom, int r, double p) {
  double s = sobolev_seminorm(f, dom, r, p);
  if (!(s > 0.0)) throw DegenerateError("field has zero seminorm on the domain");
  FieldOracle g = f;
  auto v = f.value;
  auto dv = f.derivative;
  g.value = [v, s](const Vec& x) { return v(x) / s; };
  g.derivative = [dv, s](const MultiIndex& a, const Vec& x) { return dv(a, x) / s; };
  g.gradient_bound = 1.0;
  return g;
}

FieldOracle field_by_name(const std::string& spec, const DomainSpec& dom, int r, double p) {
  int d = dom.dim();
  if (spec.rfind("const:", 0) == 0) {
    double c = 0.0;
    try {
      c = std::stod(spec.substr(6));
    } catch (const std::exception&) {
      throw ParameterError("bad constant in field spec '" + spec + "'");
    }
    return constant_field(d, c);
  }
  if (spec.size() == 2 && spec[0] == 'x' && spec[1] >= '1' && spec[1] <= '4') return coordinate_field(d, spec[1] - '1');
  if (spec == "sinprod") return sine_product_field(d, Vec{3.0, 2.0, 1.5, 1.0}, Vec{0.3, 0.7, 0.2, 0.5});
  if (spec == "smoothstep" || spec == "cusp_profile") {
    FieldOracle f = normalized(smoothstep_field(d, 1.0, 2.0, std::max(2, r)), dom, r, p);
    f.name = spec;
    return f;
  }
  std::ifstream in(spec);
  if (!in) throw IoError("unknown field '" + spec + "' and no such file");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const std::exception& e) {
    throw DataError(std::string("field file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("terms")) throw DataError("field file needs a 'terms' array");
  std::vector<MultiIndex> ex;
  std::vector<double> co;
  for (const auto& t : j.at("terms")) {
    MultiIndex e{};
    auto pw = t.at("powers").get<std::vector<int>>();
    if (static_cast<int>(pw.size()) != d) throw DataError("term powers must have one entry per axis");
    for (int i = 0; i < d; ++i) e[i] = pw[i];
    ex.push_back(e);
    co.push_back(t.at("coef").get<double>());
  }
  FieldOracle f = polynomial_field(d, ex, co);
  f.name = spec;
  return f;
}

}  // namespace cusp
