#include "cusp/local_approx.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "cusp/error.hpp"
#include "cusp/quadrature.hpp"

namespace cusp {

PolyBasis::PolyBasis(int r, int d) : r_(r), d_(d) {
  if (r < 1 || r > 8) throw ParameterError("r must be in 1..8");
  if (d < 1 || d > kMaxDim) throw ParameterError("dimension must be in 1..4");
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(r);
  alpha_.resize(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat;
    MultiIndex a{};
    for (int i = d - 1; i >= 0; --i) {
      a[i] = static_cast<int>(rest % r);
      rest /= r;
    }
    alpha_[flat] = a;
  }
}

void PolyBasis::eval(const Vec& u, double* out) const {
  double tab[kMaxDim][8];
  for (int i = 0; i < d_; ++i) shifted_legendre(r_ - 1, u[i], tab[i]);
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    double v = 1.0;
    for (int i = 0; i < d_; ++i) v *= tab[i][alpha_[j][i]];
    out[j] = v;
  }
}

Vec normalize(const Box& b, const Vec& x) {
  Vec u{};
  for (int i = 0; i < b.dim; ++i) u[i] = (x[i] - b.lo[i]) / b.side(i);
  return u;
}

double eval_poly(const PolyBasis& basis, const Box& b, const std::vector<double>& coeffs, const Vec& x) {
  double vals[512];
  basis.eval(normalize(b, x), vals);
  double s = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) s += coeffs[j] * vals[j];
  return s;
}

namespace {

int effective_order(const QuadOptions& opt, int r) { return opt.order > 0 ? opt.order : std::max(2 * r, 8); }

void check_q(double q) {
  if (!(q >= 1.0)) throw ParameterError("q must be >= 1");
}

void check_box(const Box& b) {
  if (b.dim < 1) throw DomainError("empty box");
  for (int i = 0; i < b.dim; ++i)
    if (!(b.hi[i] > b.lo[i])) throw DomainError("cell has zero volume");
}

double checked(double v) {
  if (!std::isfinite(v)) throw EvaluationError("field returned a non-finite value");
  return v;
}

// Uniform grid points of a region, for sup-norm estimates.
std::vector<Vec> region_grid(const DomainSpec* dom, const Region& reg, int grid) {
  const Box& b = reg.box;
  int d = b.dim;
  int outer_dim = reg.column ? d - 1 : d;
  std::size_t total = 1;
  for (int i = 0; i < outer_dim; ++i) total *= grid;
  std::vector<Vec> pts;
  pts.reserve(total * (reg.column ? grid : 1));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    Vec x{};
    for (int i = outer_dim - 1; i >= 0; --i) {
      int q = static_cast<int>(rest % grid);
      rest /= grid;
      x[i] = b.lo[i] + b.side(i) * q / (grid - 1);
    }
    if (!reg.column) {
      pts.push_back(x);
      continue;
    }
    double top = dom->psi(x);
    double lo = b.lo[d - 1];
    if (top <= lo) continue;
    // Stay inside the open column.
    double span = (top - lo) * (1.0 - 1e-12);
    for (int j = 0; j < grid; ++j) {
      Vec y = x;
      y[d - 1] = lo + span * j / (grid - 1);
      pts.push_back(y);
    }
  }
  return pts;
}

}  // namespace

namespace {

void emit_panel(const DomainSpec* dom, const Box& panel, double lo, int d, const GaussRule& g,
                std::vector<QuadPoint>& out) {
  int order = static_cast<int>(g.x.size());
  std::size_t total = 1;
  for (int i = 0; i < d - 1; ++i) total *= order;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    Vec x{};
    double w = 1.0;
    for (int i = d - 2; i >= 0; --i) {
      int k = static_cast<int>(rest % order);
      rest /= order;
      x[i] = panel.lo[i] + panel.side(i) * g.x[k];
      w *= panel.side(i) * g.w[k];
    }
    double top = dom->psi(x);
    if (top <= lo) continue;
    double hgt = top - lo;
    for (int j = 0; j < order; ++j) {
      QuadPoint qp{x, w * hgt * g.w[j]};
      qp.x[d - 1] = lo + hgt * g.x[j];
      out.push_back(qp);
    }
  }
}

void refine_panel(const DomainSpec* dom, const Box& panel, double lo, double frac, double height, int depth,
                  const QuadOptions& opt, const GaussRule& g, std::vector<QuadPoint>& out) {
  int kb = panel.dim;
  if (depth < opt.max_panel_depth && frac * dom->psi_oscillation(panel) > opt.psi_tol * height) {
    int parts = 1 << kb;
    for (int c = 0; c < parts; ++c) {
      Box sub = panel;
      for (int i = 0; i < kb; ++i) {
        double mid = 0.5 * (panel.lo[i] + panel.hi[i]);
        if ((c >> i) & 1) sub.lo[i] = mid;
        else sub.hi[i] = mid;
      }
      refine_panel(dom, sub, lo, frac / parts, height, depth + 1, opt, g, out);
    }
    return;
  }
  emit_panel(dom, panel, lo, kb + 1, g, out);
}

}  // namespace

std::vector<QuadPoint> region_nodes(const DomainSpec* dom, const Region& reg, int order, const QuadOptions& opt) {
  const Box& b = reg.box;
  check_box(b);
  const GaussRule& g = gauss_legendre(order);
  int d = b.dim;
  std::vector<QuadPoint> out;
  if (!reg.column) {
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= order;
    out.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      QuadPoint qp{{}, 1.0};
      for (int i = d - 1; i >= 0; --i) {
        int k = static_cast<int>(rest % order);
        rest /= order;
        qp.x[i] = b.lo[i] + b.side(i) * g.x[k];
        qp.w *= b.side(i) * g.w[k];
      }
      out.push_back(qp);
    }
    return out;
  }
  if (!dom) throw ConfigError("column regions need a domain");
  if (opt.panels < 1) throw ParameterError("panels must be >= 1");
  int kb = d - 1;
  std::size_t total = 1;
  for (int i = 0; i < kb; ++i) total *= opt.panels;
  double height = b.side(d - 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    Box panel;
    panel.dim = kb;
    for (int i = kb - 1; i >= 0; --i) {
      int k = static_cast<int>(rest % opt.panels);
      rest /= opt.panels;
      double h = b.side(i) / opt.panels;
      panel.lo[i] = b.lo[i] + h * k;
      panel.hi[i] = k + 1 == opt.panels ? b.hi[i] : b.lo[i] + h * (k + 1);
    }
    refine_panel(dom, panel, b.lo[d - 1], 1.0 / static_cast<double>(total), height, 0, opt, g, out);
  }
  return out;
}

double region_measure(const DomainSpec* dom, const Region& reg, const QuadOptions& opt) {
  if (!reg.column) return reg.box.volume();
  double s = 0.0;
  for (const auto& qp : region_nodes(dom, reg, opt.order > 0 ? opt.order : 8, opt)) s += qp.w;
  return s;
}

bool region_contains(const DomainSpec* dom, const Region& reg, const Vec& x) {
  const Box& b = reg.box;
  int d = b.dim;
  if (!reg.column) {
    for (int i = 0; i < d; ++i)
      if (!(x[i] >= b.lo[i] && x[i] < b.hi[i])) return false;
    return true;
  }
  for (int i = 0; i < d - 1; ++i)
    if (!(x[i] >= b.lo[i] && x[i] < b.hi[i])) return false;
  return x[d - 1] >= b.lo[d - 1] && x[d - 1] < dom->psi(x);
}

std::vector<double> project_region(const FieldOracle& f, const DomainSpec* dom, const Region& reg,
                                   const PolyBasis& basis, const QuadOptions& opt) {
  if (basis.dim() != reg.box.dim) throw ParameterError("basis and region dimensions differ");
  int order = effective_order(opt, basis.r());
  std::size_t n = basis.size();
  std::vector<double> vals(n);
  const Box& b = reg.box;
  if (!reg.column) {
    // Evaluate the basis at the exact Gauss nodes; recovering u from x loses digits on thin boxes.
    check_box(b);
    const GaussRule& g = gauss_legendre(order);
    int d = b.dim;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= order;
    std::vector<double> c(n, 0.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      Vec u{}, x{};
      double w = 1.0;
      for (int i = d - 1; i >= 0; --i) {
        int k = static_cast<int>(rest % order);
        rest /= order;
        u[i] = g.x[k];
        x[i] = b.lo[i] + b.side(i) * g.x[k];
        w *= g.w[k];
      }
      double fv = checked(f(x));
      basis.eval(u, vals.data());
      for (std::size_t j = 0; j < n; ++j) c[j] += w * fv * vals[j];
    }
    return c;
  }
  auto nodes = region_nodes(dom, reg, order, opt);
  double vol = b.volume();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (const auto& qp : nodes) {
    double fv = checked(f(qp.x));
    basis.eval(normalize(reg.box, qp.x), vals.data());
    double w = qp.w / vol;
    for (std::size_t a = 0; a < n; ++a) {
      rhs[a] += w * fv * vals[a];
      for (std::size_t b = 0; b <= a; ++b) G(a, b) += w * vals[a] * vals[b];
    }
  }
  if (nodes.empty()) throw DegenerateError("column region has no interior quadrature nodes");
  G = G.selfadjointView<Eigen::Lower>();
  Eigen::VectorXd c = G.colPivHouseholderQr().solve(rhs);
  return {c.data(), c.data() + n};
}

std::vector<double> project_box(const FieldOracle& f, const Box& box, int r, const QuadOptions& opt) {
  check_box(box);
  PolyBasis basis(r, box.dim);
  return project_region(f, nullptr, Region{false, box}, basis, opt);
}

std::vector<double> project_cell(const FieldOracle& f, const PartitionTree& tree, const Cell& cell, int r,
                                 const QuadOptions& opt) {
  return project_box(f, tree.cell_box(cell), r, opt);
}

ErrorValue region_error(const FieldOracle& f, const DomainSpec* dom, const Region& reg, const PolyBasis& basis,
                        const std::vector<double>& coeffs, double q, const QuadOptions& opt) {
  check_q(q);
  if (coeffs.size() != basis.size()) throw ParameterError("coefficient vector has the wrong size");
  ErrorValue ev;
  ev.estimated = reg.column || f.polynomial_degree < 0 || f.polynomial_degree > basis.r() - 1 || q != 2.0;
  std::vector<double> vals(basis.size());
  auto resid = [&](const Vec& x) {
    basis.eval(normalize(reg.box, x), vals.data());
    double s = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j) s += coeffs[j] * vals[j];
    return checked(f(x)) - s;
  };
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& x : region_grid(dom, reg, opt.grid)) m = std::max(m, std::fabs(resid(x)));
    ev.value = m;
    return ev;
  }
  int order = effective_order(opt, basis.r());
  double s = 0.0;
  for (const auto& qp : region_nodes(dom, reg, order, opt)) s += qp.w * std::pow(std::fabs(resid(qp.x)), q);
  ev.value = std::pow(s, 1.0 / q);
  return ev;
}

ErrorValue cell_error(const FieldOracle& f, const std::vector<double>& coeffs, const Box& box, int r, double q,
                      const QuadOptions& opt) {
  check_box(box);
  PolyBasis basis(r, box.dim);
  return region_error(f, nullptr, Region{false, box}, basis, coeffs, q, opt);
}

double lq_norm(const FieldOracle& f, const std::vector<Box>& region, double q, const QuadOptions& opt) {
  check_q(q);
  int order = opt.order > 0 ? opt.order : 8;
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& b : region)
      for (const auto& x : region_grid(nullptr, Region{false, b}, opt.grid)) m = std::max(m, std::fabs(checked(f(x))));
    return m;
  }
  double s = 0.0;
  for (const auto& b : region)
    for (const auto& qp : region_nodes(nullptr, Region{false, b}, order, opt))
      s += qp.w * std::pow(std::fabs(checked(f(qp.x))), q);
  return std::pow(s, 1.0 / q);
}

PiecewisePoly::PiecewisePoly(std::shared_ptr<const DomainSpec> dom, int r)
    : dom_(std::move(dom)), basis_(std::make_shared<PolyBasis>(r, dom_->dim())) {}

void PiecewisePoly::add(const Region& reg, std::vector<double> coeffs) {
  if (coeffs.size() != basis_->size()) throw ParameterError("coefficient vector has the wrong size");
  regions_.push_back(reg);
  coeffs_.push_back(std::move(coeffs));
}

double PiecewisePoly::eval(const Vec& x) const {
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (region_contains(dom_.get(), regions_[i], x)) return eval_poly(*basis_, regions_[i].box, coeffs_[i], x);
  return std::numeric_limits<double>::quiet_NaN();
}

double region_seminorm(const FieldOracle& f, const DomainSpec* dom, const Region& reg, int r, double p,
                       const QuadOptions& opt) {
  if (!f.has_derivative()) throw PreconditionError("field has no derivative evaluator");
  if (r > f.smoothness) throw PreconditionError("field derivatives are only available up to order " +
                                                std::to_string(f.smoothness));
  int d = reg.box.dim;
  std::vector<MultiIndex> alphas;
  MultiIndex a{};
  // All multi-indices with |a| = r.
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == d - 1) {
      a[i] = left;
      alphas.push_back(a);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, r);
  auto nodes = region_nodes(dom, reg, effective_order(opt, r), opt);
  double best = 0.0;
  for (const auto& al : alphas) {
    double s = 0.0;
    if (std::isinf(p)) {
      for (const auto& qp : nodes) s = std::max(s, std::fabs(f.derivative(al, qp.x)));
    } else {
      for (const auto& qp : nodes) s += qp.w * std::pow(std::fabs(f.derivative(al, qp.x)), p);
      s = std::pow(s, 1.0 / p);
    }
    best = std::max(best, s);
  }
  return best;
}

namespace {

// Greedy pieces: boxes, or columns above a cut made at level `level` (level -1 is the root column from 0).
struct Piece {
  Region region;
  int level = -1;
  Index idx{};
  std::array<int, kMaxDim - 1> res{};
  std::vector<double> coeffs;
  double err = 0.0;
  bool capped = false;
  bool capped_halving = false;
  bool alive = true;
};

class Greedy {
 public:
  Greedy(const FieldOracle& f, std::shared_ptr<const DomainSpec> dom, const AdaptiveOptions& opt)
      : f_(f), dom_(std::move(dom)), opt_(opt), basis_(opt.r, dom_->dim()) {
    kcap_ = opt.max_level > 0 ? std::min(opt.max_level, 40) : 40;
  }

  int kcap() const { return kcap_; }

  void seed_root() {
    Piece p;
    p.region.column = true;
    p.region.box = column_box(dom_->base_box(), 0.0);
    p.level = -1;
    add(std::move(p));
  }

  void split_worst() {
    std::size_t id = heap_.top().second;
    heap_.pop();
    Piece p = pieces_[id];
    pieces_[id].alive = false;
    --alive_;
    if (!p.region.column) {
      split_box(p);
      return;
    }
    // Cut once psi varies by at most 2^{-k-2} over the base, as the cell construction requires; otherwise halve.
    int k = p.level + 1;
    bool cut = k <= kcap_ && cut_height(p) > 0.0;
    if (cut && k >= 1) {
      Box base = base_box_at(*dom_, p.idx, p.res);
      cut = dom_->psi_sup(base) - dom_->psi_inf(base, std::ldexp(1.0, -k - 12)) <= std::ldexp(1.0, -k - 2);
    }
    if (!cut && p.capped_halving) cut = k <= kcap_ && cut_height(p) > 0.0;
    for (auto& c : cut ? cut_column(p) : halve_column(p)) push(std::move(c));
  }

  bool can_split() const { return !heap_.empty(); }
  std::uint64_t pieces() const { return alive_; }

  BudgetPoint snapshot(std::uint64_t budget) const {
    double q = opt_.q;
    double total = 0.0, fringe = 0.0;
    for (const auto& p : pieces_) {
      if (!p.alive) continue;
      if (std::isinf(q)) {
        total = std::max(total, p.err);
        if (p.capped) fringe = std::max(fringe, p.err);
      } else {
        total += std::pow(p.err, q);
        if (p.capped) fringe += std::pow(p.err, q);
      }
    }
    if (!std::isinf(q)) {
      total = std::pow(total, 1.0 / q);
      fringe = std::pow(fringe, 1.0 / q);
    }
    return BudgetPoint{budget, alive_, total, fringe};
  }

  PiecewisePoly materialize() const {
    PiecewisePoly pp(dom_, opt_.r);
    for (const auto& p : pieces_)
      if (p.alive) pp.add(p.region, p.coeffs);
    return pp;
  }

 private:
  Box column_box(const Box& base, double lower) const {
    Box b = base;
    int d = dom_->dim();
    b.dim = d;
    b.lo[d - 1] = lower;
    b.hi[d - 1] = dom_->psi_sup(base);
    return b;
  }

  void split_box(const Piece& p) {
    const Box& b = p.region.box;
    int axis = 0;
    for (int i = 1; i < b.dim; ++i)
      if (b.side(i) > b.side(axis)) axis = i;
    double mid = 0.5 * (b.lo[axis] + b.hi[axis]);
    for (int half = 0; half < 2; ++half) {
      Piece c;
      c.region.box = b;
      if (half == 0) c.region.box.hi[axis] = mid;
      else c.region.box.lo[axis] = mid;
      add(std::move(c));
    }
  }

  void evaluate(Piece& p) const {
    p.coeffs = project_region(f_, dom_.get(), p.region, basis_, opt_.quad);
    p.err = region_error(f_, dom_.get(), p.region, basis_, p.coeffs, opt_.q, opt_.quad).value;
    if (p.region.column) {
      int kb = dom_->base_dim();
      int coarsest = 0;
      for (int i = 1; i < kb; ++i)
        if (p.res[i] < p.res[coarsest]) coarsest = i;
      p.capped_halving = p.res[coarsest] >= 50;
      p.capped = p.capped_halving && p.level + 1 > kcap_;
    } else {
      double smallest = kInf;
      for (int i = 0; i < p.region.box.dim; ++i) smallest = std::min(smallest, p.region.box.side(i));
      p.capped = smallest < 1e-13;
    }
  }

  double key(const Piece& p) const { return std::isinf(opt_.q) ? p.err : std::pow(p.err, opt_.q); }

  // Two columns over the halves of the base along its coarsest axis.
  std::vector<Piece> halve_column(const Piece& p) const {
    int kb = dom_->base_dim();
    int axis = 0;
    for (int i = 1; i < kb; ++i)
      if (p.res[i] < p.res[axis]) axis = i;
    std::vector<Piece> out;
    for (std::uint64_t half = 0; half < 2; ++half) {
      Piece c;
      c.level = p.level;
      c.res = p.res;
      c.res[axis] += 1;
      c.idx = p.idx;
      c.idx[axis] = 2 * p.idx[axis] + half;
      c.region.column = true;
      c.region.box = column_box(base_box_at(*dom_, c.idx, c.res), p.region.box.lo[dom_->dim() - 1]);
      evaluate(c);
      out.push_back(std::move(c));
    }
    return out;
  }

  double cut_top(const Piece& p) const {
    int k = p.level + 1;
    Box base = base_box_at(*dom_, p.idx, p.res);
    return dom_->psi_inf(base, std::ldexp(1.0, -k - 12)) - std::ldexp(1.0, -k - 1);
  }

  double cut_height(const Piece& p) const { return cut_top(p) - p.region.box.lo[dom_->dim() - 1]; }

  // Box up to inf psi - 2^{-k-1} over the current base, at level k = level + 1, plus the column above it.
  std::vector<Piece> cut_column(const Piece& p) const {
    int k = p.level + 1;
    int d = dom_->dim();
    Box base = base_box_at(*dom_, p.idx, p.res);
    double lower = p.region.box.lo[d - 1];
    double top = cut_top(p);
    std::vector<Piece> out(2);
    out[0].region.box = base;
    out[0].region.box.dim = d;
    out[0].region.box.lo[d - 1] = lower;
    out[0].region.box.hi[d - 1] = top;
    out[1].level = k;
    out[1].idx = p.idx;
    out[1].res = p.res;
    out[1].region.column = true;
    out[1].region.box = column_box(base, top);
    for (auto& c : out) evaluate(c);
    return out;
  }

  void add(Piece p) {
    evaluate(p);
    push(std::move(p));
  }

  void push(Piece p) {
    std::size_t id = pieces_.size();
    if (!p.capped) heap_.push({key(p), id});
    pieces_.push_back(std::move(p));
    ++alive_;
  }

  struct Cmp {
    bool operator()(const std::pair<double, std::size_t>& a, const std::pair<double, std::size_t>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return a.second > b.second;
    }
  };

  const FieldOracle& f_;
  std::shared_ptr<const DomainSpec> dom_;
  AdaptiveOptions opt_;
  PolyBasis basis_;
  int kcap_ = 0;
  std::vector<Piece> pieces_;
  std::priority_queue<std::pair<double, std::size_t>, std::vector<std::pair<double, std::size_t>>, Cmp> heap_;
  std::uint64_t alive_ = 0;
};

}  // namespace

AdaptiveResult adaptive_approximate(const FieldOracle& f, std::shared_ptr<const DomainSpec> dom, std::uint64_t budget,
                                    const AdaptiveOptions& opt) {
  if (budget < 1) throw ParameterError("budget must be >= 1");
  if (!dom) throw ConfigError("approximation needs a domain");
  if (f.dim != dom->dim()) throw ParameterError("field and domain dimensions differ");
  check_q(opt.q);
  Greedy g(f, dom, opt);
  g.seed_root();
  std::vector<std::uint64_t> marks = opt.record;
  marks.push_back(budget);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  AdaptiveResult out;
  std::size_t mi = 0;
  while (mi < marks.size() && marks[mi] <= g.pieces()) out.trace.push_back(g.snapshot(marks[mi++]));
  while (g.pieces() < budget && g.can_split()) {
    g.split_worst();
    while (mi < marks.size() && marks[mi] <= g.pieces()) out.trace.push_back(g.snapshot(marks[mi++]));
  }
  // Budgets beyond what the depth cap allows report the final state.
  while (mi < marks.size()) out.trace.push_back(g.snapshot(marks[mi++]));
  BudgetPoint last = g.snapshot(budget);
  out.error = last.error;
  out.fringe_defect = last.fringe_defect;
  out.pieces = last.pieces;
  out.approx = g.materialize();
  return out;
}

Region subtree_region(const DomainSpec& dom, int k, const Index& idx) {
  auto n = k == 0 ? std::vector<int>(dom.base_dim(), 0) : level_resolutions(dom.moduli(), k, false);
  std::array<int, kMaxDim - 1> nk{};
  for (int i = 0; i < dom.base_dim(); ++i) nk[i] = n[i];
  Box base = base_box_at(dom, idx, nk);
  double lower = 0.0;
  if (k >= 1) {
    std::array<int, kMaxDim - 1> np{};
    Index pidx{};
    if (k >= 2) {
      auto m = level_resolutions(dom.moduli(), k - 1, false);
      for (int i = 0; i < dom.base_dim(); ++i) np[i] = m[i];
    }
    for (int i = 0; i < dom.base_dim(); ++i) pidx[i] = idx[i] >> (nk[i] - np[i]);
    lower = dom.psi_inf(base_box_at(dom, pidx, np), std::ldexp(1.0, -k - 12)) - std::ldexp(1.0, -k);
  }
  Region reg;
  reg.column = true;
  reg.box = base;
  reg.box.dim = dom.dim();
  reg.box.lo[dom.dim() - 1] = lower;
  reg.box.hi[dom.dim() - 1] = dom.psi_sup(base);
  return reg;
}

LocalRatioReport local_ratio_check(const FieldOracle& f, const DomainSpec& dom, int r, double p, double q, int k_max,
                          int samples_per_level, std::uint64_t seed, const QuadOptions& opt) {
  if (k_max < 0) throw ParameterError("k_max must be >= 0");
  if (samples_per_level < 0) throw ParameterError("samples_per_level must be >= 0");
  check_q(q);
  if (!(p >= 1.0) || p > q) throw ParameterError("need 1 <= p <= q");
  PolyBasis basis(r, dom.dim());
  Vec target{};
  if (dom.hset()) {
    target = dom.hset()->limit_point(0);
  } else {
    for (int i = 0; i < dom.base_dim(); ++i) target[i] = dom.offset() + 0.5;
  }
  std::mt19937_64 rng(seed);
  LocalRatioReport rep;
  rep.ratio_min = kInf;
  double expo = 1.0 / q - (std::isinf(p) ? 0.0 : 1.0 / p);
  for (int k = 0; k <= k_max; ++k) {
    auto n = k == 0 ? std::vector<int>(dom.base_dim(), 0) : level_resolutions(dom.moduli(), k, false);
    std::vector<std::pair<Index, bool>> picks;
    Index path{};
    for (int i = 0; i < dom.base_dim(); ++i) {
      double u = std::ldexp(target[i] - dom.offset(), n[i]);
      double cells = std::ldexp(1.0, n[i]);
      path[i] = static_cast<std::uint64_t>(std::clamp(std::floor(u), 0.0, cells - 1));
    }
    picks.push_back({path, true});
    if (k > 0)
      for (int s = 0; s < samples_per_level; ++s) {
        Index idx{};
        for (int i = 0; i < dom.base_dim(); ++i) {
          std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n[i]) - 1);
          idx[i] = pick(rng);
        }
        picks.push_back({idx, false});
      }
    double scale = std::ldexp(1.0, -k * r) * std::pow(std::ldexp(1.0, -k), expo);
    double prod = 1.0;
    for (const auto& m : dom.moduli()) prod *= m.eval(std::ldexp(1.0, -k));
    scale *= std::pow(prod, expo);
    double level_max = 0.0;
    for (const auto& [idx, on_path] : picks) {
      Region reg = subtree_region(dom, k, idx);
      auto coeffs = project_region(f, &dom, reg, basis, opt);
      LocalRatioSample s;
      s.k0 = k;
      s.idx = idx;
      s.on_gamma_path = on_path;
      s.error = region_error(f, &dom, reg, basis, coeffs, q, opt).value;
      s.seminorm = region_seminorm(f, &dom, reg, r, p, opt);
      s.scale = scale;
      s.ratio = s.seminorm > 0 ? s.error / (scale * s.seminorm) : 0.0;
      level_max = std::max(level_max, s.ratio);
      rep.ratio_max = std::max(rep.ratio_max, s.ratio);
      if (s.seminorm > 0) rep.ratio_min = std::min(rep.ratio_min, s.ratio);
      rep.samples.push_back(s);
    }
    rep.ratio_max_per_level.push_back(level_max);
  }
  if (std::isinf(rep.ratio_min)) rep.ratio_min = 0.0;
  return rep;
}

}  // namespace cusp
