#include "cusp/empirics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "cusp/error.hpp"
#include "cusp/local_approx.hpp"
#include "cusp/quadrature.hpp"

namespace cusp {

FitResult fit_rate(const std::vector<double>& n, const std::vector<double>& e) {
  if (n.size() != e.size()) throw ParameterError("n and e differ in length");
  if (n.size() < 4) throw ParameterError("rate fit needs at least 4 points");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(e[i] > 0.0) || !std::isfinite(e[i])) throw DataError("rate fit needs positive finite errors");
    if (!(n[i] > 0.0)) throw DataError("rate fit needs positive n");
    if (i > 0 && !(n[i] > n[i - 1])) throw DataError("n must be strictly increasing");
  }
  std::size_t m = n.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += std::log(n[i]);
    sy += std::log(e[i]);
  }
  double mx = sx / m, my = sy / m, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double dx = std::log(n[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e[i]) - my);
  }
  FitResult fr;
  fr.points = m;
  fr.slope = sxy / sxx;
  fr.intercept = my - fr.slope * mx;
  for (std::size_t i = 0; i < m; ++i)
    fr.max_residual = std::max(fr.max_residual, std::fabs(std::log(e[i]) - fr.intercept - fr.slope * std::log(n[i])));
  return fr;
}

namespace {

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// j-th derivative of the order-s smoothstep on [0,1].
double smoothstep_derivative(double u, int s, int j) {
  double total = 0.0;
  for (int n = 0; n <= s; ++n) {
    int power = s + 1 + n;
    if (j > power) continue;
    double c = binom(s + n, n) * binom(2 * s + 1, s - n) * ((n % 2) ? -1.0 : 1.0);
    for (int i = 0; i < j; ++i) c *= power - i;
    total += c * std::pow(u, power - j);
  }
  return total;
}

// Length of the s-neighbourhood of the unit-scale Cantor set with m pieces of ratio lambda.
double cantor_neighbourhood(double s, int m, double lambda) {
  double hull = (0.5 - 0.5 / m) / (1.0 - lambda);
  double gap = 1.0 / m - 2.0 * lambda * hull;
  double factor = 1.0;
  for (int depth = 0; depth < 2000; ++depth) {
    if (s >= 0.5 * gap) return factor * (2.0 * hull + 2.0 * s);
    if (s < 1e-300) return 0.0;
    factor *= m * lambda;
    s /= lambda;
  }
  return 0.0;
}

}  // namespace

double bump_profile(double tau, int s, int j) {
  if (tau <= 0.5) return 0.0;
  if (tau >= 1.0) return j == 0 ? 1.0 : 0.0;
  return smoothstep_derivative(2.0 * tau - 1.0, s, j) * std::pow(2.0, j);
}

BumpFamily BumpFamily::build(const DomainSpec& dom, int k, int r) {
  if (dom.psi_kind() != DomainSpec::PsiKind::hset_cusp || dom.hset()->kind() != HSet::Kind::cantor)
    throw ConfigError("bump families need a cantor hset_cusp domain");
  const HSet& g = *dom.hset();
  if (k < 1 || k > g.depth() - 1) throw ParameterError("k must be in 1..depth-1");
  if (r < 1 || r > 6) throw ParameterError("r must be in 1..6");
  BumpFamily fam;
  fam.dom_ = std::make_shared<DomainSpec>(dom);
  fam.k_ = k;
  fam.r_ = r;
  double lam = g.lambda();
  fam.gap_ = std::pow(lam, k) * (1.0 / g.m() - lam) / 2.0;
  fam.b_k_ = 2.0 - 0.5 * std::pow(fam.gap_, 1.0 / dom.sigma());
  for (const auto& c : g.cells(k)) {
    Box b;
    b.dim = dom.base_dim();
    for (int i = 0; i < b.dim; ++i) {
      b.lo[i] = c.center[i] - c.halfwidth;
      b.hi[i] = c.center[i] + c.halfwidth;
    }
    fam.cubes_.push_back(b);
  }
  return fam;
}

double BumpFamily::rho_k(double t, int j) const {
  double scale = 2.0 / (2.0 - b_k_);
  return bump_profile(scale * (t - b_k_), r_ + 1, j) * std::pow(scale, j);
}

double BumpFamily::eval(std::size_t j, const Vec& x) const {
  const Box& q = cubes_.at(j);
  int kb = q.dim;
  for (int i = 0; i < kb; ++i)
    if (!(x[i] > q.lo[i] && x[i] < q.hi[i])) return 0.0;
  if (x[kb] <= b_k_) return 0.0;
  return rho_k(x[kb]);
}

double BumpFamily::max_boundary_psi(int per_edge) const {
  if (per_edge < 2) throw ParameterError("need at least two samples per edge");
  double worst = -kInf;
  for (const auto& q : cubes_) {
    int kb = q.dim;
    for (int face = 0; face < 2 * kb; ++face) {
      int axis = face / 2;
      std::size_t total = 1;
      for (int i = 0; i < kb - 1; ++i) total *= per_edge;
      for (std::size_t flat = 0; flat < total; ++flat) {
        Vec x{};
        std::size_t rest = flat;
        for (int i = 0; i < kb; ++i) {
          if (i == axis) {
            x[i] = face % 2 ? q.hi[i] : q.lo[i];
            continue;
          }
          int t = static_cast<int>(rest % per_edge);
          rest /= per_edge;
          x[i] = q.lo[i] + q.side(i) * t / (per_edge - 1);
        }
        worst = std::max(worst, dom_->psi(x));
      }
    }
  }
  return worst;
}

double BumpFamily::boundary_derivative_max() const {
  double t0 = b_k_ + 0.25 * (2.0 - b_k_);
  double m = 0.0;
  for (int j = 0; j <= r_; ++j) m = std::max(m, std::fabs(rho_k(t0 * (1.0 + 1e-15), j)));
  return m;
}

double BumpFamily::superlevel_measure(double t) const {
  if (t >= 2.0) return 0.0;
  const HSet& g = *dom_->hset();
  double s = std::pow(2.0 - t, dom_->sigma());
  if (s > gap_) throw DomainError("superlevel measure is only exact above b_k");
  double scale = std::pow(g.lambda(), k_);
  double one = scale * cantor_neighbourhood(s / scale, g.m(), g.lambda());
  return std::pow(one, dom_->base_dim());
}

namespace {

// Integral of F(t) * measure{psi > t} over t in (t0, t1), t1 <= 2, in the variable w = -log(2 - t).
template <class F>
double layer_integral(const BumpFamily& fam, double t0, double t1, F integrand) {
  const GaussRule& g = gauss_legendre(8);
  auto run = [&](double w0, double w1, int panels) {
    double s = 0.0, h = (w1 - w0) / panels;
    for (int pnl = 0; pnl < panels; ++pnl)
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        double w = w0 + h * (pnl + g.x[i]);
        double t = 2.0 - std::exp(-w);
        s += h * g.w[i] * std::exp(-w) * integrand(t) * fam.superlevel_measure(t);
      }
    return s;
  };
  double w0 = -std::log(2.0 - t0);
  if (t1 < 2.0) return run(w0, -std::log(2.0 - t1), 256);
  return run(w0, w0 + 80.0, 1600);
}

}  // namespace

BumpNorms bump_norms(const BumpFamily& fam, double p, double q) {
  if (!(p >= 1.0) || std::isinf(p) || !(q >= 1.0) || std::isinf(q)) throw ParameterError("need finite p, q >= 1");
  double b = fam.b_k();
  double t0 = b + 0.25 * (2.0 - b), t1 = b + 0.5 * (2.0 - b);
  int r = fam.r();
  BumpNorms out;
  out.k = fam.level();
  out.count = fam.size();
  out.b_k = b;
  out.lq = std::pow(layer_integral(fam, t0, t1, [&](double t) { return std::pow(fam.rho_k(t), q); }) +
                        layer_integral(fam, t1, 2.0, [](double) { return 1.0; }),
                    1.0 / q);
  out.lp = std::pow(layer_integral(fam, t0, t1, [&](double t) { return std::pow(fam.rho_k(t), p); }) +
                        layer_integral(fam, t1, 2.0, [](double) { return 1.0; }),
                    1.0 / p);
  out.grad_lp =
      std::pow(layer_integral(fam, t0, t1, [&](double t) { return std::pow(std::fabs(fam.rho_k(t, r)), p); }), 1.0 / p);
  out.separation = std::pow(2.0, 1.0 / q) * out.lq / out.grad_lp;
  return out;
}

BumpNorms bump_norms_direct(const BumpFamily& fam, std::size_t j, double p, double q) {
  if (!(p >= 1.0) || std::isinf(p) || !(q >= 1.0) || std::isinf(q)) throw ParameterError("need finite p, q >= 1");
  const DomainSpec& dom = fam.domain();
  int d = dom.dim();
  Region reg;
  reg.column = true;
  reg.box = fam.cube(j);
  reg.box.dim = d;
  reg.box.lo[d - 1] = fam.b_k();
  reg.box.hi[d - 1] = 2.0;
  QuadOptions opt;
  opt.order = 12;
  opt.panels = 8;
  opt.psi_tol = 1e-6;
  double sq = 0, sp = 0, sg = 0;
  for (const auto& qp : region_nodes(&dom, reg, opt.order, opt)) {
    double v = fam.rho_k(qp.x[d - 1]);
    sq += qp.w * std::pow(v, q);
    sp += qp.w * std::pow(v, p);
    sg += qp.w * std::pow(std::fabs(fam.rho_k(qp.x[d - 1], fam.r())), p);
  }
  BumpNorms out;
  out.k = fam.level();
  out.count = fam.size();
  out.b_k = fam.b_k();
  out.lq = std::pow(sq, 1.0 / q);
  out.lp = std::pow(sp, 1.0 / p);
  out.grad_lp = std::pow(sg, 1.0 / p);
  out.separation = std::pow(2.0, 1.0 / q) * out.lq / out.grad_lp;
  return out;
}

NormScaling norm_scaling(const DomainSpec& dom, int k_min, int k_max, double p, double q, int r) {
  if (k_max - k_min + 1 < 4) throw ParameterError("norm scaling needs at least 4 levels");
  NormScaling ns;
  std::vector<double> ks, lq, gr, nb, sep;
  for (int k = k_min; k <= k_max; ++k) {
    BumpFamily fam = BumpFamily::build(dom, k, r);
    BumpNorms bn = bump_norms(fam, p, q);
    ns.rows.push_back(bn);
    ks.push_back(k);
    lq.push_back(bn.lq);
    gr.push_back(bn.grad_lp);
    nb.push_back(static_cast<double>(bn.count));
    sep.push_back(bn.separation);
  }
  const HSet& g = *dom.hset();
  double lm = std::log(static_cast<double>(g.m()));
  // log_m(norm) against k: the exponential fit is a linear fit in log space with n = m^k.
  std::vector<double> mk;
  for (double k : ks) mk.push_back(std::exp(k * lm));
  ns.lq_slope = fit_rate(mk, lq).slope;
  ns.grad_slope = fit_rate(mk, gr).slope;
  ns.packing_slope = fit_rate(nb, sep).slope;
  double dm1 = dom.base_dim(), th = g.theta(), sg = dom.sigma();
  double nu = sg * dm1 + 1.0;
  ns.lq_predicted = -dm1 * nu / (th * sg * q);
  ns.grad_predicted = dm1 * (r - nu / p) / (th * sg);
  ns.packing_predicted = -(r + nu * (1.0 / q - 1.0 / p)) / (sg * th);
  return ns;
}

std::vector<WidthEstimate> ellipsoid_widths(std::vector<double> semi_axes, int n_max) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  for (double a : semi_axes)
    if (!(a >= 0.0)) throw ParameterError("semi-axes must be nonnegative");
  std::sort(semi_axes.begin(), semi_axes.end(), std::greater<>());
  std::vector<WidthEstimate> out;
  for (int n = 0; n <= n_max; ++n)
    out.push_back({n, n < static_cast<int>(semi_axes.size()) ? semi_axes[n] : 0.0, "svd"});
  return out;
}

namespace {

std::vector<WidthEstimate> laplacian_widths(const Eigen::MatrixXd& L, int r, int n_max) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EvaluationError("eigenvalue solver failed");
  std::vector<double> axes;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    axes.push_back(1.0 / std::sqrt(1.0 + std::pow(std::max(es.eigenvalues()[i], 0.0), r)));
  return ellipsoid_widths(axes, n_max);
}

void check_size(std::size_t n) {
  if (n > 4096) throw SizeError("discretization has " + std::to_string(n) + " unknowns, above the 4096 limit");
  if (n == 0) throw DomainError("discretization has no grid points");
}

}  // namespace

std::vector<WidthEstimate> interval_widths(int grid, int r, int n_max) {
  if (grid < 2) throw ParameterError("grid must be >= 2");
  if (r < 1) throw ParameterError("r must be >= 1");
  std::size_t n = grid;
  check_size(n);
  double h = 1.0 / grid;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    L(i, i) += 1;
    L(i + 1, i + 1) += 1;
    L(i, i + 1) -= 1;
    L(i + 1, i) -= 1;
  }
  L /= h * h;
  return laplacian_widths(L, r, n_max);
}

std::vector<WidthEstimate> domain_widths(const DomainSpec& dom, int r, int grid, int n_max) {
  if (grid < 2) throw ParameterError("grid must be >= 2");
  if (r < 1) throw ParameterError("r must be >= 1");
  int d = dom.dim();
  double h = 1.0 / grid;
  int vert = 2 * grid;
  // Cell centres of the uniform grid over base x (0, 2) that lie inside the domain.
  std::vector<int> dims(d, grid);
  dims[d - 1] = vert;
  std::size_t total = 1;
  for (int v : dims) total *= v;
  std::vector<long> id(total, -1);
  std::size_t count = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    Vec x{};
    for (int i = d - 1; i >= 0; --i) {
      x[i] = (static_cast<double>(rest % dims[i]) + 0.5) * h + (i < d - 1 ? dom.offset() : 0.0);
      rest /= dims[i];
    }
    if (dom.contains(x)) id[flat] = static_cast<long>(count++);
    if (count > 4096) check_size(count);
  }
  check_size(count);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(count, count);
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (id[flat] < 0) continue;
    std::size_t stride = 1;
    for (int i = d - 1; i >= 0; --i) {
      std::size_t coord = (flat / stride) % dims[i];
      if (coord + 1 < static_cast<std::size_t>(dims[i])) {
        long nb = id[flat + stride];
        if (nb >= 0) {
          long a = id[flat];
          L(a, a) += 1;
          L(nb, nb) += 1;
          L(a, nb) -= 1;
          L(nb, a) -= 1;
        }
      }
      stride *= dims[i];
    }
  }
  L /= h * h;
  return laplacian_widths(L, r, n_max);
}

}  // namespace cusp
