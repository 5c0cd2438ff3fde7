#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cusp/rational.hpp"

namespace cusp {

enum class WidthKind { entropy, kolmogorov, linear, gelfand };
enum class TauKind { tau1, tau2, tau2_hatq };
enum class HSetVariant { general, plane };

WidthKind parse_width_kind(const std::string& s);
const char* width_kind_name(WidthKind k);
const char* tau_kind_name(TauKind k);

// Lambda(t) on (0,1]: constant 1, or ln(e/t)^beta.
struct SlowVariation {
  enum class Kind { constant, log_power } kind = Kind::constant;
  double beta = 0.0;

  static SlowVariation parse(const std::string& s);  // "const" or "logpow:B"
  double lambda(double t) const;
  // psi_Lambda(t) = 1 / Lambda(1/t) for t >= 1.
  double psi(double t) const;
  std::string str() const;
};

struct ParamSet {
  Exponent p;
  Exponent q;
  int r = 1;
  int d = 2;
  Rational sigma{1};
  std::optional<Rational> theta;
  WidthKind width = WidthKind::entropy;
  SlowVariation lambda;
};

struct RatePrediction {
  Rational alpha1;
  Rational alpha2;
  // lambda_*/gamma_*: the magnitude the h-set results substitute.
  Rational rho;
  std::optional<std::array<Rational, 4>> thetas;
  int j_star = 0;
  Rational exponent;  // final power of n
  TauKind tau = TauKind::tau1;
  std::optional<Exponent> q_hat;
  int width_case = 0;  // 1 or 2 for widths, 0 for entropy numbers
  std::vector<std::string> notes;
};

struct HSetPrediction {
  RatePrediction hset;
  std::optional<RatePrediction> generic;
  std::string generic_error;
};

// r + (sigma(d-1)+1)(1/q - 1/p)
Rational embedding_margin(const ParamSet& ps);
std::optional<Exponent> q_hat(WidthKind kind, const Exponent& p, const Exponent& q);

RatePrediction entropy_exponents(const ParamSet& ps);
RatePrediction width_exponents(const ParamSet& ps);
// Dispatches on ps.width (entropy numbers or one of the widths).
HSetPrediction hset_exponents(const ParamSet& ps, HSetVariant variant);

// Unique t >= 1 with t^gamma u(t) = s.
double solve_scale(double gamma, const std::function<double(double)>& u, double s);
double tau_factor(const ParamSet& ps, double n, TauKind which);

}  // namespace cusp
