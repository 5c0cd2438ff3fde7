#include "cusp/tree_summation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cusp/error.hpp"
#include "json.hpp"

namespace cusp {

void WeightedTree::validate() const {
  std::size_t n = parent.size();
  if (n == 0) throw ParameterError("tree has no vertices");
  if (g.size() != n || v.size() != n) throw ParameterError("g and v need one entry per vertex");
  if (!(p >= 1.0) || !(q >= 1.0)) throw ParameterError("p and q must be >= 1");
  int roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] == -1) ++roots;
    else if (parent[i] < 0 || static_cast<std::size_t>(parent[i]) >= n || parent[i] == static_cast<int>(i))
      throw ParameterError("bad parent index at vertex " + std::to_string(i));
    if (!(g[i] >= 0.0) || !(v[i] >= 0.0) || !std::isfinite(g[i]) || !std::isfinite(v[i]))
      throw ParameterError("g and v must be finite and nonnegative");
  }
  if (roots != 1) throw ParameterError("tree needs exactly one root");
  if (topological_order().size() != n) throw ParameterError("parent links contain a cycle");
}

std::vector<int> WeightedTree::topological_order() const {
  std::size_t n = parent.size();
  std::vector<std::vector<int>> kids(n);
  int root = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] < 0) root = static_cast<int>(i);
    else if (static_cast<std::size_t>(parent[i]) < n) kids[parent[i]].push_back(static_cast<int>(i));
  }
  std::vector<int> order;
  if (root < 0) return order;
  order.push_back(root);
  for (std::size_t h = 0; h < order.size(); ++h)
    for (int c : kids[order[h]]) order.push_back(c);
  return order;
}

std::vector<int> WeightedTree::depths() const {
  std::vector<int> dep(parent.size(), 0);
  for (int i : topological_order())
    if (parent[i] >= 0) dep[i] = dep[parent[i]] + 1;
  return dep;
}

namespace {

nlohmann::json exponent_json(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

double exponent_from(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw DataError("exponent must be a number or \"inf\"");
  }
  return j.get<double>();
}

}  // namespace

std::string WeightedTree::to_json() const {
  nlohmann::json j;
  j["parents"] = parent;
  j["g"] = g;
  j["v"] = v;
  j["p"] = exponent_json(p);
  j["q"] = exponent_json(q);
  return j.dump();
}

WeightedTree WeightedTree::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("tree is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("tree JSON must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "parents" && it.key() != "g" && it.key() != "v" && it.key() != "p" && it.key() != "q")
      throw DataError("unknown key '" + it.key() + "' in tree JSON");
  WeightedTree wt;
  try {
    for (const auto& x : j.at("parents")) wt.parent.push_back(x.is_null() ? -1 : x.get<int>());
    wt.g = j.at("g").get<std::vector<double>>();
    wt.v = j.at("v").get<std::vector<double>>();
    if (j.contains("p")) wt.p = exponent_from(j["p"]);
    if (j.contains("q")) wt.q = exponent_from(j["q"]);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tree JSON: ") + e.what());
  }
  wt.validate();
  return wt;
}

WeightedTree chain_tree(std::size_t n, const std::vector<double>& g, const std::vector<double>& v) {
  WeightedTree wt;
  for (std::size_t i = 0; i < n; ++i) wt.parent.push_back(static_cast<int>(i) - 1);
  wt.g = g;
  wt.v = v;
  wt.validate();
  return wt;
}

std::vector<double> apply(const WeightedTree& wt, const std::vector<double>& f) {
  if (f.size() != wt.size()) throw ParameterError("f needs one entry per vertex");
  std::vector<double> prefix(wt.size(), 0.0), out(wt.size());
  for (int i : wt.topological_order()) {
    double up = wt.parent[i] >= 0 ? prefix[wt.parent[i]] : 0.0;
    prefix[i] = up + wt.g[i] * f[i];
    out[i] = wt.v[i] * prefix[i];
  }
  return out;
}

bool decay_check(const WeightedTree& wt, double a, double b) {
  if (std::isinf(wt.q)) throw PreconditionError("decay condition needs q < inf");
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("a and b must be positive");
  std::size_t n = wt.size();
  auto order = wt.topological_order();
  auto dep = wt.depths();
  int maxd = *std::max_element(dep.begin(), dep.end());
  // level_sum[x][j] = sum of v^q over descendants of x at relative depth j
  std::vector<std::vector<double>> level_sum(n, std::vector<double>(maxd + 1, 0.0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    level_sum[x][0] += std::pow(wt.v[x], wt.q);
    if (wt.parent[x] >= 0)
      for (int j = 0; j + 1 <= maxd; ++j) level_sum[wt.parent[x]][j + 1] += level_sum[x][j];
  }
  for (std::size_t x = 0; x < n; ++x) {
    double vq = std::pow(wt.v[x], wt.q);
    for (int j = 0; j <= maxd; ++j)
      if (level_sum[x][j] > b * std::pow(2.0, -a * j) * vq * (1.0 + 1e-12))
        return false;
  }
  return true;
}

NormMethod parse_norm_method(const std::string& s) {
  if (s == "spectral") return NormMethod::spectral;
  if (s == "ascent") return NormMethod::ascent;
  if (s == "exhaustive") return NormMethod::exhaustive;
  throw ParameterError("unknown norm method '" + s + "'");
}

const char* norm_method_name(NormMethod m) {
  switch (m) {
    case NormMethod::spectral: return "spectral";
    case NormMethod::ascent: return "ascent";
    case NormMethod::exhaustive: return "exhaustive";
  }
  return "?";
}

namespace {

double lp(const Eigen::VectorXd& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

double conj(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

Eigen::MatrixXd path_matrix(const WeightedTree& wt) {
  std::size_t n = wt.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (int y = static_cast<int>(x); y >= 0; y = wt.parent[y]) m(x, y) = wt.v[x] * wt.g[y];
  return m;
}

double ratio(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, double p, double q) {
  double den = lp(x, p);
  return den > 0 ? lp(A * x, q) / den : 0.0;
}

// Nonlinear power iteration for the p -> q norm of a nonnegative matrix, 1 < p <= q < inf.
Eigen::VectorXd boyd(const Eigen::MatrixXd& A, Eigen::VectorXd x, double p, double q, int max_iter, double tol) {
  double pc = conj(p);
  double prev = ratio(A, x, p, q);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = A * x;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = std::pow(std::fabs(y[i]), q - 1.0);
    Eigen::VectorXd z = A.transpose() * y;
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std::pow(std::fabs(z[i]), pc - 1.0);
    double nz = lp(z, p);
    if (!(nz > 0)) break;
    x = z / nz;
    double cur = ratio(A, x, p, q);
    if (std::fabs(cur - prev) <= tol * std::max(1.0, cur)) break;
    prev = cur;
  }
  return x;
}

}  // namespace

NormEstimate operator_norm(const WeightedTree& wt, NormMethod method, const NormOptions& opt) {
  wt.validate();
  std::size_t n = wt.size();
  double p = wt.p, q = wt.q;
  if (p > q) throw ParameterError("operator norm needs p <= q");
  Eigen::MatrixXd A = path_matrix(wt);
  NormEstimate est;
  est.method = method;
  if (method == NormMethod::spectral) {
    if (p != 2.0 || q != 2.0) throw ParameterError("spectral method needs p = q = 2");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    est.value = svd.singularValues()(0);
    Eigen::VectorXd w = svd.matrixV().col(0).cwiseAbs();
    est.witness.assign(w.data(), w.data() + n);
    est.lower_bound = ratio(A, w, p, q);
    est.exact = true;
    est.starts = 1;
    return est;
  }
  if (method == NormMethod::exhaustive && n > 14) throw ParameterError("exhaustive method supports at most 14 vertices");
  Eigen::VectorXd best;
  double best_val = -1.0;
  auto consider = [&](const Eigen::VectorXd& x) {
    double r = ratio(A, x, p, q);
    if (r > best_val) {
      best_val = r;
      best = x;
    }
  };
  // Closed forms: extreme points of the l1 ball, and row norms for q = inf.
  if (p == 1.0 || std::isinf(q)) {
    if (p == 1.0) {
      for (std::size_t j = 0; j < n; ++j) consider(Eigen::VectorXd::Unit(n, j));
    } else {
      double pc = conj(p);
      for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = std::isinf(pc) ? (A(i, j) > 0 ? 1.0 : 0.0) : std::pow(A(i, j), pc - 1.0);
        if (x.sum() > 0) consider(x);
      }
    }
    est.exact = true;
    est.starts = static_cast<int>(n);
  } else {
    int starts = method == NormMethod::exhaustive ? std::max(opt.starts, 256) : std::max(opt.starts, 1);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < starts; ++s) {
      Eigen::VectorXd x(n);
      if (s == 0) x.setOnes();
      else if (s <= static_cast<int>(n) && method == NormMethod::exhaustive) x = Eigen::VectorXd::Unit(n, s - 1).array() + 1e-3;
      else
        for (std::size_t i = 0; i < n; ++i) x[i] = u(rng);
      x /= lp(x, p);
      consider(boyd(A, x, p, q, opt.max_iter, opt.tol));
    }
    est.starts = starts;
  }
  est.value = best_val;
  est.lower_bound = best_val;
  est.witness.assign(best.data(), best.data() + n);
  return est;
}

BoundReport bound_check(const WeightedTree& wt, double a, double b, double ceiling, const NormOptions& opt) {
  wt.validate();
  if (wt.p > wt.q) throw PreconditionError("bound check needs p <= q");
  if (!decay_check(wt, a, b)) throw PreconditionError("decay condition fails for the given (a, b)");
  BoundReport rep;
  rep.ceiling = ceiling;
  NormMethod m = (wt.p == 2.0 && wt.q == 2.0) ? NormMethod::spectral
                 : wt.size() <= 14            ? NormMethod::exhaustive
                                              : NormMethod::ascent;
  rep.norm_lb = operator_norm(wt, m, opt).lower_bound;
  for (std::size_t i = 0; i < wt.size(); ++i) rep.bound = std::max(rep.bound, wt.g[i] * wt.v[i]);
  rep.ratio = rep.bound > 0 ? rep.norm_lb / rep.bound : (rep.norm_lb > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  rep.violated = rep.norm_lb > ceiling * rep.bound;
  return rep;
}

WeightedTree random_geometric_tree(std::size_t n, double a, double p, double q, std::mt19937_64& rng) {
  if (n < 1) throw ParameterError("tree needs at least one vertex");
  if (std::isinf(q)) throw ParameterError("geometric weights need q < inf");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WeightedTree wt;
  wt.p = p;
  wt.q = q;
  wt.parent.assign(n, -1);
  for (std::size_t i = 1; i < n; ++i) wt.parent[i] = static_cast<int>(rng() % i);
  std::vector<int> kids(n, 0);
  for (std::size_t i = 1; i < n; ++i) ++kids[wt.parent[i]];
  wt.g.resize(n);
  wt.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) wt.g[i] = u(rng);
  wt.v[0] = 0.5 + 0.5 * u(rng);
  // Each child takes at most a 2^{-a}/kids share of the parent's v^q.
  for (std::size_t i = 1; i < n; ++i) {
    int par = wt.parent[i];
    double share = std::pow(2.0, -a) / kids[par] * (0.25 + 0.75 * u(rng));
    wt.v[i] = wt.v[par] * std::pow(share, 1.0 / q);
  }
  return wt;
}

}  // namespace cusp
