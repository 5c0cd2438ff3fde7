#include "cusp/rates.hpp"

#include <cmath>
#include <limits>

#include "cusp/error.hpp"

namespace cusp {

WidthKind parse_width_kind(const std::string& s) {
  if (s == "entropy") return WidthKind::entropy;
  if (s == "kolmogorov") return WidthKind::kolmogorov;
  if (s == "linear") return WidthKind::linear;
  if (s == "gelfand") return WidthKind::gelfand;
  throw ParameterError("unknown width kind '" + s + "'");
}

const char* width_kind_name(WidthKind k) {
  switch (k) {
    case WidthKind::entropy: return "entropy";
    case WidthKind::kolmogorov: return "kolmogorov";
    case WidthKind::linear: return "linear";
    case WidthKind::gelfand: return "gelfand";
  }
  return "?";
}

const char* tau_kind_name(TauKind k) {
  switch (k) {
    case TauKind::tau1: return "tau1";
    case TauKind::tau2: return "tau2";
    case TauKind::tau2_hatq: return "tau2_hatq";
  }
  return "?";
}

SlowVariation SlowVariation::parse(const std::string& s) {
  SlowVariation v;
  if (s == "const" || s == "constant") return v;
  if (s.rfind("logpow:", 0) == 0) {
    v.kind = Kind::log_power;
    v.beta = Rational::parse(s.substr(7)).to_double();
    return v;
  }
  throw ParameterError("unknown slow variation '" + s + "'");
}

double SlowVariation::lambda(double t) const {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("Lambda(t) needs t in (0,1]");
  if (kind == Kind::constant) return 1.0;
  return std::pow(1.0 - std::log(t), beta);
}

double SlowVariation::psi(double t) const {
  if (!(t >= 1.0)) throw DomainError("psi_Lambda(t) needs t >= 1");
  if (kind == Kind::constant) return 1.0;
  return std::pow(1.0 + std::log(t), -beta);
}

std::string SlowVariation::str() const {
  if (kind == Kind::constant) return "const";
  return "logpow:" + Rational::from_double(beta).str();
}

namespace {

struct Scales {
  Rational delta;  // r/d + 1/q - 1/p
  Rational rho;    // lambda_* / gamma_*
};

void validate_common(const ParamSet& ps) {
  if (ps.r < 1) throw ParameterError("r must be >= 1");
  if (ps.d < 2) throw ParameterError("d must be >= 2");
  if (ps.sigma < Rational(1)) throw ParameterError("sigma must be >= 1");
  if (ps.p.inv() < ps.q.inv()) throw ParameterError("p <= q is required");
}

Rational gamma_generic(const ParamSet& ps) { return ps.sigma * Rational(ps.d - 1); }

void require_embedding(const ParamSet& ps) {
  Rational m = embedding_margin(ps);
  if (!m.positive())
    throw InfeasibleError("infeasible: embedding condition r + (sigma(d-1)+1)(1/q-1/p) = " + m.str() +
                          " is not positive");
}

Scales generic_scales(const ParamSet& ps) {
  Rational dq = ps.q.inv() - ps.p.inv();
  Rational g = gamma_generic(ps);
  return {Rational(ps.r, ps.d) + dq, (Rational(ps.r) + (g + Rational(1)) * dq) / g};
}

RatePrediction entropy_from(const ParamSet& ps, const Scales& sc) {
  Rational gap = ps.p.inv() - ps.q.inv();
  RatePrediction out;
  out.alpha1 = Rational(ps.r, ps.d);
  out.alpha2 = sc.rho + gap;
  out.rho = sc.rho;
  if (out.alpha1 == out.alpha2) throw DegenerateError("degenerate: alpha1 == alpha2");
  out.j_star = out.alpha1 < out.alpha2 ? 1 : 2;
  out.exponent = -(out.j_star == 1 ? out.alpha1 : out.alpha2);
  out.tau = out.j_star == 1 ? TauKind::tau1 : TauKind::tau2;
  return out;
}

RatePrediction widths_from(const ParamSet& ps, const Scales& sc) {
  if (ps.p.is_infinite() || ps.q.is_infinite() || ps.p.inv() == Rational(1))
    throw InfeasibleError("infeasible: widths need 1 < p <= q < inf");
  Exponent qh = *q_hat(ps.width, ps.p, ps.q);
  Rational gap = ps.p.inv() - ps.q.inv();
  Rational half(1, 2);
  RatePrediction out;
  out.alpha1 = Rational(ps.r, ps.d);
  out.alpha2 = sc.rho + gap;
  out.rho = sc.rho;
  out.q_hat = qh;
  bool case1 = qh.inv() >= half || ps.p == ps.q;
  if (case1) {
    out.width_case = 1;
    if (out.alpha1 == out.alpha2) throw DegenerateError("degenerate: alpha1 == alpha2");
    out.j_star = out.alpha1 < out.alpha2 ? 1 : 2;
    out.exponent = -(out.j_star == 1 ? out.alpha1 : out.alpha2) + gap;
    out.tau = out.j_star == 1 ? TauKind::tau1 : TauKind::tau2;
    return out;
  }
  out.width_case = 2;
  Rational mn = min(gap, half - qh.inv());
  Rational scale = Rational(1) / (Rational(2) * qh.inv());  // q_hat / 2
  std::array<Rational, 4> th{sc.delta + mn, scale * sc.delta, sc.rho + mn, scale * sc.rho};
  out.thetas = th;
  int best = 0;
  for (int j = 1; j < 4; ++j)
    if (th[j] < th[best]) best = j;
  for (int j = 0; j < 4; ++j)
    if (j != best && th[j] == th[best])
      throw DegenerateError("degenerate: theta" + std::to_string(best + 1) + " == theta" + std::to_string(j + 1));
  out.j_star = best + 1;
  out.exponent = -th[best];
  out.tau = best < 2 ? TauKind::tau1 : (best == 2 ? TauKind::tau2 : TauKind::tau2_hatq);
  return out;
}

RatePrediction dispatch(const ParamSet& ps, const Scales& sc) {
  return ps.width == WidthKind::entropy ? entropy_from(ps, sc) : widths_from(ps, sc);
}

}  // namespace

Rational embedding_margin(const ParamSet& ps) {
  return Rational(ps.r) + (gamma_generic(ps) + Rational(1)) * (ps.q.inv() - ps.p.inv());
}

std::optional<Exponent> q_hat(WidthKind kind, const Exponent& p, const Exponent& q) {
  switch (kind) {
    case WidthKind::entropy: return std::nullopt;
    case WidthKind::kolmogorov: return q;
    case WidthKind::linear: {
      Exponent pc = p.conjugate();
      return q.inv() < pc.inv() ? pc : q;  // min{q, p'}
    }
    case WidthKind::gelfand: return p.conjugate();
  }
  return std::nullopt;
}

RatePrediction entropy_exponents(const ParamSet& ps) {
  validate_common(ps);
  require_embedding(ps);
  ParamSet e = ps;
  e.width = WidthKind::entropy;
  return entropy_from(e, generic_scales(ps));
}

RatePrediction width_exponents(const ParamSet& ps) {
  validate_common(ps);
  if (ps.width == WidthKind::entropy) throw ParameterError("width_exponents needs a width kind");
  require_embedding(ps);
  return widths_from(ps, generic_scales(ps));
}

HSetPrediction hset_exponents(const ParamSet& ps, HSetVariant variant) {
  validate_common(ps);
  if (!ps.theta) throw ParameterError("theta is required for h-set rates");
  const Rational& th = *ps.theta;
  if (!th.positive() || !(th < Rational(ps.d))) throw ParameterError("theta must lie in (0, d)");
  if (variant == HSetVariant::plane) {
    if (th.den() != 1 || th.num() > ps.d - 2)
      throw ParameterError("plane h-set needs integer theta in {1,...,d-2}");
  }
  require_embedding(ps);
  Rational dq = ps.q.inv() - ps.p.inv();
  Scales sc{Rational(ps.r, ps.d) + dq, Rational(0)};
  if (variant == HSetVariant::general) {
    sc.rho = (Rational(ps.r) + (gamma_generic(ps) + Rational(1)) * dq) / (ps.sigma * th);
  } else {
    Rational inner = ps.sigma * (Rational(ps.d - 1) - th) + th + Rational(1);
    sc.rho = (Rational(ps.r) + dq * inner) / th;
  }
  HSetPrediction out{dispatch(ps, sc), std::nullopt, {}};
  try {
    out.generic = dispatch(ps, generic_scales(ps));
  } catch (const Error& e) {
    out.generic_error = e.what();
  }
  return out;
}

double solve_scale(double gamma, const std::function<double(double)>& u, double s) {
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("s must be positive and finite");
  auto f = [&](double t) { return std::pow(t, gamma) * u(t) - s; };
  double lo = 1.0;
  if (f(lo) > 0.0) throw RangeError("no bracket in [1, 2^64]: t^gamma u(t) exceeds s at t = 1");
  double hi = 2.0;
  const double cap = std::ldexp(1.0, 64);
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) throw RangeError("no bracket in [1, 2^64]");
  }
  double t = hi;
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double v = f(mid);
    if (std::fabs(v) <= 1e-12 * s) {
      t = mid;
      break;
    }
    if (v < 0.0) lo = mid; else hi = mid;
    t = 0.5 * (lo + hi);
  }
  if (std::fabs(f(t)) > 1e-10 * s) throw EvaluationError("bisection did not reach the residual tolerance");
  double step = t * 1e-6;
  if (!(f(t + step) > f(t) && f(t) > f(t - step)))
    throw RangeError("t^gamma u(t) is not increasing at the solution; s is too small");
  return t;
}

double tau_factor(const ParamSet& ps, double n, TauKind which) {
  validate_common(ps);
  if (!(n >= 2.0)) throw ParameterError("tau needs n >= 2");
  if (which == TauKind::tau1) return 1.0;
  double arg = n;
  if (which == TauKind::tau2_hatq) {
    auto qh = q_hat(ps.width, ps.p, ps.q);
    if (!qh) throw ParameterError("tau2_hatq needs a width kind with q_hat");
    if (qh->is_infinite()) throw ParameterError("tau2_hatq needs finite q_hat");
    arg = std::pow(n, qh->to_double() / 2.0);
  }
  double gamma = gamma_generic(ps).to_double();
  double lam = embedding_margin(ps).to_double();
  double gap = (ps.p.inv() - ps.q.inv()).to_double();
  const SlowVariation& sv = ps.lambda;
  double t = solve_scale(gamma, [&](double x) { return sv.psi(x); }, arg);
  double phi = t / std::pow(arg, 1.0 / gamma);
  return std::pow(phi, -lam) * std::pow(sv.psi(t), gap);
}

}  // namespace cusp
