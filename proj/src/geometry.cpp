#include "cusp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cusp/error.hpp"
#include "json.hpp"

namespace cusp {

BoundaryModulus BoundaryModulus::power(double sigma, double scale) {
  BoundaryModulus m;
  m.sigma = sigma;
  m.scale = scale;
  m.validate();
  return m;
}

BoundaryModulus BoundaryModulus::power_log(double sigma, double scale, double beta) {
  BoundaryModulus m;
  m.kind = Kind::power_log;
  m.sigma = sigma;
  m.scale = scale;
  m.beta = beta;
  m.validate();
  return m;
}

double BoundaryModulus::eval(double t) const {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("modulus argument must lie in (0,1]");
  double v = scale * std::pow(t, sigma);
  if (kind == Kind::power_log) v *= std::pow(1.0 - std::log(t), beta);
  return v;
}

void BoundaryModulus::validate() {
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) throw ParameterError("modulus sigma must be >= 1");
  if (!(scale > 0.0 && scale <= 1.0)) throw ParameterError("modulus scale must lie in (0,1]");
  if (!std::isfinite(beta)) throw ParameterError("modulus beta must be finite");
  double need = 0.0;
  double prev = 0.0;
  for (int j = 40; j >= 0; --j) {
    double t = std::ldexp(1.0, -j);
    double v = eval(t);
    if (!(v > 0.0)) throw ParameterError("modulus must be positive on (0,1]");
    if (v < prev) throw ParameterError("modulus must be non-decreasing");
    prev = v;
    need = std::max(need, v / t);
    if (j >= 1) need = std::max(need, eval(2.0 * t) / v);
  }
  if (a_star == 0.0) {
    a_star = std::max(1.0, need);
  } else if (a_star < 1.0 || need > a_star * (1.0 + 1e-12)) {
    throw ParameterError("modulus violates phi(t) <= a_star t or phi(2t) <= a_star phi(t)");
  }
}

DomainSpec DomainSpec::constant(int d, double value, std::vector<BoundaryModulus> moduli, double offset) {
  DomainSpec s;
  s.d_ = d;
  s.kind_ = PsiKind::constant;
  s.value_ = value;
  s.moduli_ = std::move(moduli);
  s.offset_ = offset;
  s.validate();
  return s;
}

DomainSpec DomainSpec::hset_cusp(double sigma, std::shared_ptr<const HSet> g, std::vector<BoundaryModulus> moduli) {
  if (!g) throw ConfigError("hset_cusp domain needs an h-set");
  if (!(sigma >= 1.0)) throw ParameterError("cusp sigma must be >= 1");
  DomainSpec s;
  s.d_ = g->domain_dim();
  s.kind_ = PsiKind::hset_cusp;
  s.sigma_ = sigma;
  s.hset_ = std::move(g);
  s.offset_ = s.hset_->origin();
  if (moduli.empty()) {
    double a = fit_hset_prefactor(sigma, s.hset_, 10000, 7);
    moduli.assign(s.d_ - 1, BoundaryModulus::power(sigma, a));
  }
  s.moduli_ = std::move(moduli);
  s.validate();
  return s;
}

DomainSpec DomainSpec::explicit_sample(int d, int resolution, std::vector<double> values,
                                       std::vector<BoundaryModulus> moduli, double offset) {
  DomainSpec s;
  s.d_ = d;
  s.kind_ = PsiKind::explicit_sample;
  s.resolution_ = resolution;
  s.samples_ = std::move(values);
  s.moduli_ = std::move(moduli);
  s.offset_ = offset;
  s.validate();
  return s;
}

void DomainSpec::validate() {
  if (d_ < 2 || d_ > kMaxDim) throw ParameterError("dimension must lie in [2, " + std::to_string(kMaxDim) + "]");
  if (static_cast<int>(moduli_.size()) != d_ - 1) throw ConfigError("need exactly d-1 boundary moduli");
  for (auto& m : moduli_) m.validate();
  if (!std::isfinite(offset_)) throw ParameterError("base offset must be finite");
  switch (kind_) {
    case PsiKind::constant:
      if (!(value_ >= 1.0 && value_ <= 2.0)) throw DomainError("invalid domain: constant psi must lie in [1,2]");
      break;
    case PsiKind::hset_cusp:
      if (!hset_) throw ConfigError("hset_cusp domain needs an h-set");
      if (hset_->domain_dim() != d_) throw ConfigError("h-set dimension does not match the domain");
      break;
    case PsiKind::explicit_sample: {
      if (resolution_ < 1) throw ParameterError("sample resolution must be >= 1");
      double expect = std::pow(resolution_ + 1.0, d_ - 1);
      if (expect > 5.0e7) throw SizeError("sample grid too large");
      if (samples_.size() != static_cast<std::size_t>(expect))
        throw ConfigError("explicit samples must have (N+1)^(d-1) entries");
      for (double v : samples_)
        if (!(v >= 1.0 && v <= 2.0)) throw DomainError("invalid domain: psi samples must lie in [1,2]");
      break;
    }
  }
}

void DomainSpec::set_moduli(std::vector<BoundaryModulus> moduli) {
  moduli_ = std::move(moduli);
  validate();
}

Box DomainSpec::base_box() const {
  Box b;
  b.dim = d_ - 1;
  for (int i = 0; i < b.dim; ++i) {
    b.lo[i] = offset_;
    b.hi[i] = offset_ + 1.0;
  }
  return b;
}

double DomainSpec::sample_at(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int i = 0; i < d_ - 1; ++i) flat = flat * (resolution_ + 1) + idx[i];
  return samples_[flat];
}

double DomainSpec::psi(const Vec& xprime) const {
  switch (kind_) {
    case PsiKind::constant:
      return value_;
    case PsiKind::hset_cusp: {
      double dist = hset_->distance(xprime);
      return 2.0 - std::pow(std::min(dist, 1.0), 1.0 / sigma_);
    }
    case PsiKind::explicit_sample: {
      int k = d_ - 1;
      std::vector<int> base(k);
      std::vector<double> w(k);
      for (int i = 0; i < k; ++i) {
        double u = std::clamp((xprime[i] - offset_) * resolution_, 0.0, static_cast<double>(resolution_));
        int c = std::min(static_cast<int>(std::floor(u)), resolution_ - 1);
        base[i] = c;
        w[i] = u - c;
      }
      double v = 0.0;
      std::vector<int> idx(k);
      for (int mask = 0; mask < (1 << k); ++mask) {
        double wt = 1.0;
        for (int i = 0; i < k; ++i) {
          bool up = mask & (1 << i);
          idx[i] = base[i] + (up ? 1 : 0);
          wt *= up ? w[i] : 1.0 - w[i];
        }
        if (wt != 0.0) v += wt * sample_at(idx);
      }
      return v;
    }
  }
  return value_;
}

bool DomainSpec::contains(const Vec& x) const {
  for (int i = 0; i < d_ - 1; ++i)
    if (!(x[i] > offset_ && x[i] < offset_ + 1.0)) return false;
  double xd = x[d_ - 1];
  if (!(xd > 0.0)) return false;
  return xd < psi(x);
}

namespace {

// Multilinear interpolants attain extremes on the tensor set of box ends and interior grid lines.
template <class Pick>
double explicit_extreme(const DomainSpec& s, const Box& b, int resolution, double offset, Pick pick) {
  int k = s.base_dim();
  std::vector<std::vector<double>> coords(k);
  for (int i = 0; i < k; ++i) {
    coords[i].push_back(b.lo[i]);
    double ulo = (b.lo[i] - offset) * resolution, uhi = (b.hi[i] - offset) * resolution;
    for (int g = static_cast<int>(std::floor(ulo)) + 1; g < uhi; ++g)
      if (g > ulo) coords[i].push_back(offset + static_cast<double>(g) / resolution);
    coords[i].push_back(b.hi[i]);
  }
  std::vector<std::size_t> at(k, 0);
  double best = pick.init;
  while (true) {
    Vec x{};
    for (int i = 0; i < k; ++i) x[i] = coords[i][at[i]];
    best = pick(best, s.psi(x));
    int i = 0;
    for (; i < k; ++i) {
      if (++at[i] < coords[i].size()) break;
      at[i] = 0;
    }
    if (i == k) break;
  }
  return best;
}

struct MinPick {
  double init = 1e300;
  double operator()(double a, double b) const { return std::min(a, b); }
};
struct MaxPick {
  double init = -1e300;
  double operator()(double a, double b) const { return std::max(a, b); }
};

}  // namespace

double DomainSpec::psi_inf(const Box& b, double tol) const {
  switch (kind_) {
    case PsiKind::constant:
      return value_;
    case PsiKind::hset_cusp: {
      double far = hset_->box_max_distance(b, tol, 1.0 / sigma_);
      return 2.0 - std::pow(std::min(far, 1.0), 1.0 / sigma_);
    }
    case PsiKind::explicit_sample:
      return explicit_extreme(*this, b, resolution_, offset_, MinPick{});
  }
  return value_;
}

double DomainSpec::psi_sup(const Box& b) const {
  switch (kind_) {
    case PsiKind::constant:
      return value_;
    case PsiKind::hset_cusp:
      return 2.0 - std::pow(std::min(hset_->box_distance(b), 1.0), 1.0 / sigma_);
    case PsiKind::explicit_sample:
      return explicit_extreme(*this, b, resolution_, offset_, MaxPick{});
  }
  return value_;
}

double DomainSpec::psi_oscillation(const Box& b) const {
  switch (kind_) {
    case PsiKind::constant:
      return 0.0;
    case PsiKind::hset_cusp: {
      double w = 0.0;
      for (int i = 0; i < b.dim; ++i) w = std::max(w, b.side(i));
      double near = std::min(hset_->box_distance(b), 1.0);
      return std::pow(std::min(near + w, 1.0), 1.0 / sigma_) - std::pow(near, 1.0 / sigma_);
    }
    case PsiKind::explicit_sample:
      return psi_sup(b) - psi_inf(b);
  }
  return 0.0;
}

HolderReport DomainSpec::holder_check(std::size_t pairs, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HolderReport rep;
  rep.pairs = pairs;
  int k = d_ - 1;
  for (std::size_t n = 0; n < pairs; ++n) {
    double t = std::ldexp(1.0, -static_cast<int>(std::floor(u(rng) * 30.0))) * (0.5 + 0.5 * u(rng));
    Vec x{}, y{};
    for (int i = 0; i < k; ++i) {
      x[i] = offset_ + u(rng);
      double r = moduli_[i].eval(t);
      y[i] = std::clamp(x[i] + r * (2.0 * u(rng) - 1.0), offset_, offset_ + 1.0);
    }
    double diff = std::fabs(psi(x) - psi(y));
    double ratio = diff / t;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (diff > t * (1.0 + 1e-12) + 1e-15) ++rep.violations;
  }
  rep.passed = rep.violations == 0;
  return rep;
}

double fit_hset_prefactor(double sigma, std::shared_ptr<const HSet> g, std::size_t pairs, std::uint64_t seed) {
  double floor_a = 1.0 / sigma;
  for (int j = 0; j <= 20; ++j) {
    double a = std::ldexp(1.0, -j);
    if (a < floor_a) break;
    std::vector<BoundaryModulus> mods(g->ambient_dim(), BoundaryModulus::power(sigma, a));
    DomainSpec probe = DomainSpec::hset_cusp(sigma, g, mods);
    if (probe.holder_check(pairs, seed).passed) return a;
  }
  return floor_a;
}

namespace {

nlohmann::json modulus_json(const BoundaryModulus& m) {
  nlohmann::json j;
  j["kind"] = m.kind == BoundaryModulus::Kind::power ? "power" : "power_log";
  j["sigma"] = m.sigma;
  j["scale"] = m.scale;
  if (m.kind == BoundaryModulus::Kind::power_log) j["beta"] = m.beta;
  j["a_star"] = m.a_star;
  return j;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

BoundaryModulus modulus_from(const nlohmann::json& j) {
  reject_unknown(j, {"kind", "sigma", "scale", "beta", "a_star"}, "modulus");
  BoundaryModulus m;
  std::string kind = j.value("kind", "power");
  if (kind == "power") m.kind = BoundaryModulus::Kind::power;
  else if (kind == "power_log") m.kind = BoundaryModulus::Kind::power_log;
  else throw ConfigError("unknown modulus kind '" + kind + "'");
  m.sigma = j.at("sigma").get<double>();
  m.scale = j.value("scale", 1.0);
  m.beta = j.value("beta", 0.0);
  m.a_star = j.value("a_star", 0.0);
  m.validate();
  return m;
}

}  // namespace

std::string DomainSpec::to_json() const {
  nlohmann::json j;
  j["dim"] = d_;
  j["base_offset"] = offset_;
  j["moduli"] = nlohmann::json::array();
  for (const auto& m : moduli_) j["moduli"].push_back(modulus_json(m));
  nlohmann::json p;
  switch (kind_) {
    case PsiKind::constant:
      p["kind"] = "constant";
      p["value"] = value_;
      break;
    case PsiKind::hset_cusp:
      p["kind"] = "hset_cusp";
      p["sigma"] = sigma_;
      p["hset"] = nlohmann::json::parse(hset_->to_json());
      break;
    case PsiKind::explicit_sample:
      p["kind"] = "explicit_sample";
      p["resolution"] = resolution_;
      p["values"] = samples_;
      break;
  }
  j["psi"] = p;
  return j.dump();
}

DomainSpec DomainSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("invalid domain JSON: ") + e.what());
  }
  try {
    reject_unknown(j, {"dim", "moduli", "psi", "base_offset"}, "domain");
    const auto& p = j.at("psi");
    std::string kind = p.at("kind").get<std::string>();
    std::vector<BoundaryModulus> mods;
    if (j.contains("moduli"))
      for (const auto& m : j["moduli"]) mods.push_back(modulus_from(m));
    double offset = j.value("base_offset", 0.0);
    if (kind == "constant") {
      reject_unknown(p, {"kind", "value"}, "psi");
      return constant(j.at("dim").get<int>(), p.value("value", 2.0), mods, offset);
    }
    if (kind == "hset_cusp") {
      reject_unknown(p, {"kind", "sigma", "hset"}, "psi");
      if (!p.contains("hset")) throw ConfigError("hset_cusp psi needs an 'hset' entry");
      nlohmann::json hj = p["hset"];
      if (!hj.contains("origin") && j.contains("base_offset")) hj["origin"] = offset;
      auto g = std::make_shared<const HSet>(HSet::from_json(hj.dump()));
      if (j.contains("dim") && j["dim"].get<int>() != g->domain_dim())
        throw ConfigError("domain dim does not match the h-set dim");
      return hset_cusp(p.at("sigma").get<double>(), g, mods);
    }
    if (kind == "explicit_sample") {
      reject_unknown(p, {"kind", "resolution", "values"}, "psi");
      return explicit_sample(j.at("dim").get<int>(), p.at("resolution").get<int>(),
                             p.at("values").get<std::vector<double>>(), mods, offset);
    }
    throw ConfigError("unknown psi kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed domain JSON: ") + e.what());
  }
}

}  // namespace cusp
