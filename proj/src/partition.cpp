#include "cusp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>

#include "cusp/error.hpp"
#include "cusp/quadrature.hpp"

namespace cusp {

const char* role_name(CellRole r) {
  switch (r) {
    case CellRole::interior: return "interior";
    case CellRole::near_gamma: return "near_gamma";
    case CellRole::far_gamma: return "far_gamma";
  }
  return "?";
}

int dyadic_bracket(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("bracket needs a positive finite value");
  int e = 0;
  std::frexp(value, &e);  // value in [2^{e-1}, 2^e)
  return 1 - e;
}

std::vector<int> level_resolutions(const std::vector<BoundaryModulus>& moduli, int k, bool shifted) {
  if (k < 0) throw ParameterError("level must be >= 0");
  if (moduli.empty()) throw ConfigError("no boundary moduli");
  std::vector<int> n(moduli.size());
  if (shifted) {
    int v = dyadic_bracket(moduli[0].eval(std::ldexp(1.0, -k - 4))) + 1;
    std::fill(n.begin(), n.end(), v);
  } else {
    for (std::size_t i = 0; i < moduli.size(); ++i) n[i] = dyadic_bracket(moduli[i].eval(std::ldexp(1.0, -k - 3)));
  }
  return n;
}

Resolutions tree_resolutions(const DomainSpec& dom, int K, bool pruned) {
  int kb = dom.base_dim();
  Resolutions res(K + 1);
  for (int i = 0; i < kb; ++i) res[0][i] = 0;
  for (int k = 1; k <= K; ++k) {
    auto n = level_resolutions(dom.moduli(), k, pruned);
    for (int i = 0; i < kb; ++i) {
      res[k][i] = n[i];
      if (n[i] < res[k - 1][i]) throw DomainError("resolutions must be non-decreasing in k");
    }
  }
  return res;
}

namespace {

int key_bits(int kb) { return 63 / kb; }

std::uint64_t pack(const Index& idx, int kb) {
  int b = key_bits(kb);
  std::uint64_t key = 0;
  for (int i = 0; i < kb; ++i) key = (kb == 1) ? idx[i] : ((key << b) | idx[i]);
  return key;
}

double psi_tol(int k) { return std::ldexp(1.0, -k - 12); }

}  // namespace

Box base_box_at(const DomainSpec& dom, const Index& idx, const std::array<int, kMaxDim - 1>& n) {
  Box b;
  b.dim = dom.base_dim();
  for (int i = 0; i < b.dim; ++i) {
    double h = std::ldexp(1.0, -n[i]);
    b.lo[i] = dom.offset() + static_cast<double>(idx[i]) * h;
    b.hi[i] = dom.offset() + static_cast<double>(idx[i] + 1) * h;
  }
  return b;
}

Cell make_root_cell(const DomainSpec& dom, bool pruned) {
  Cell c;
  c.level = 0;
  c.psi_inf = dom.psi_inf(dom.base_box(), psi_tol(0));
  if (!(c.psi_inf >= 1.0 - 1e-12 && c.psi_inf <= 2.0))
    throw DomainError("invalid domain: minimum of psi outside [1,2]");
  c.c_minus = 0.0;
  c.c_plus = c.psi_inf - 0.5;
  c.role = pruned ? CellRole::near_gamma : CellRole::interior;
  return c;
}

Cell make_child_cell(const DomainSpec& dom, const Cell& parent, int k, const Index& idx,
                     const std::array<int, kMaxDim - 1>& n, bool pruned) {
  Cell c;
  c.level = k;
  c.idx = idx;
  Box b = base_box_at(dom, idx, n);
  c.psi_inf = dom.psi_inf(b, psi_tol(k));
  c.c_minus = parent.c_plus;
  c.c_plus = c.psi_inf - std::ldexp(1.0, -k - 1);
  if (pruned) {
    double s = std::ldexp(1.0, -n[0]);
    if (dom.hset()->box_within(b, s)) {
      c.role = CellRole::near_gamma;
    } else {
      c.role = CellRole::far_gamma;
      c.has_tail = true;
      c.tail_top = dom.psi_sup(b);
    }
  }
  return c;
}

std::size_t PartitionTree::size() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

std::vector<std::uint32_t> PartitionTree::children(int k, std::size_t j) const {
  if (k >= max_level_) return {};
  const auto& st = child_start_[k];
  return {child_list_[k].begin() + st[j], child_list_[k].begin() + st[j + 1]};
}

std::size_t PartitionTree::child_count(int k, std::size_t j) const {
  if (k >= max_level_) return 0;
  return child_start_[k][j + 1] - child_start_[k][j];
}

Box PartitionTree::base_box(const Cell& c) const { return base_box_at(*domain_, c.idx, res_[c.level]); }

Box PartitionTree::cell_box(const Cell& c) const {
  Box b = base_box(c);
  int d = domain_->dim();
  b.dim = d;
  b.lo[d - 1] = c.c_minus;
  b.hi[d - 1] = c.c_plus;
  return b;
}

double PartitionTree::cell_volume(const Cell& c) const {
  double v = c.c_plus - c.c_minus;
  for (int i = 0; i < domain_->base_dim(); ++i) v = std::ldexp(v, -res_[c.level][i]);
  return v;
}

std::optional<std::size_t> PartitionTree::find(int k, const Vec& xprime) const {
  int kb = domain_->base_dim();
  Index idx{};
  for (int i = 0; i < kb; ++i) {
    double u = std::ldexp(xprime[i] - domain_->offset(), res_[k][i]);
    double cells = std::ldexp(1.0, res_[k][i]);
    if (!(u >= 0.0 && u < cells)) return std::nullopt;
    idx[i] = static_cast<std::uint64_t>(std::floor(u));
  }
  std::uint64_t key = pack(idx, kb);
  const auto& keys = keys_[k];
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys.begin());
}

std::optional<PartitionTree::Location> PartitionTree::locate(const Vec& x) const {
  int d = domain_->dim();
  double xd = x[d - 1];
  std::size_t j = 0;
  for (int k = 0; k <= max_level_; ++k) {
    if (k > 0) {
      auto next = find(k, x);
      if (!next || levels_[k][*next].parent != static_cast<std::int64_t>(j)) return std::nullopt;
      j = *next;
    }
    const Cell& c = levels_[k][j];
    if (xd <= c.c_minus) return std::nullopt;
    if (xd < c.c_plus) return Location{k, j, false};
    if (c.has_tail) {
      if (xd < domain_->psi(x)) return Location{k, j, true};
      return std::nullopt;
    }
    if (child_count(k, j) == 0) return std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t PartitionTree::near_count(int k) const {
  std::uint64_t n = 0;
  for (const auto& c : levels_[k])
    if (c.role == CellRole::near_gamma) ++n;
  return n;
}

class TreeBuilder {
 public:
  static PartitionTree build(std::shared_ptr<const DomainSpec> dom, int K, bool pruned, const TreeOptions& opt) {
    if (!dom) throw ConfigError("tree needs a domain");
    if (K < 1) throw ParameterError("K must be >= 1");
    if (pruned && dom->psi_kind() != DomainSpec::PsiKind::hset_cusp)
      throw ConfigError("pruned tree needs an hset_cusp domain");
    int kb = dom->base_dim();
    PartitionTree t;
    t.domain_ = dom;
    t.variant_ = pruned ? PartitionTree::Variant::hset_pruned : PartitionTree::Variant::full;
    t.max_level_ = K;
    t.res_ = tree_resolutions(*dom, K, pruned);
    for (int k = 0; k <= K; ++k)
      for (int i = 0; i < kb; ++i)
        if (t.res_[k][i] > key_bits(kb)) throw SizeError("resolution exceeds index width at level " + std::to_string(k));
    t.levels_.resize(K + 1);
    t.keys_.resize(K + 1);
    t.child_start_.resize(K);
    t.child_list_.resize(K);
    t.levels_[0].push_back(make_root_cell(*dom, pruned));
    t.keys_[0].push_back(0);
    std::uint64_t total = 1;
    for (int k = 1; k <= K; ++k) {
      const auto& parents = t.levels_[k - 1];
      int shift_total = 0;
      std::array<int, kMaxDim - 1> dn{};
      for (int i = 0; i < kb; ++i) {
        dn[i] = t.res_[k][i] - t.res_[k - 1][i];
        shift_total += dn[i];
      }
      double expanding = 0.0;
      for (const auto& p : parents)
        if (!pruned || p.role == CellRole::near_gamma) expanding += 1.0;
      double predicted = expanding * std::ldexp(1.0, shift_total);
      if (static_cast<double>(total) + predicted > static_cast<double>(opt.max_cells))
        throw SizeError("tree would hold " + std::to_string(static_cast<double>(total) + predicted) +
                        " cells by level " + std::to_string(k) + ", above the budget of " +
                        std::to_string(opt.max_cells));
      std::vector<Cell> cells;
      cells.reserve(static_cast<std::size_t>(predicted));
      std::uint64_t per = std::uint64_t{1} << shift_total;
      for (std::size_t pj = 0; pj < parents.size(); ++pj) {
        const Cell& p = parents[pj];
        if (pruned && p.role != CellRole::near_gamma) continue;
        for (std::uint64_t t_off = 0; t_off < per; ++t_off) {
          Index idx{};
          std::uint64_t rest = t_off;
          for (int i = kb - 1; i >= 0; --i) {
            std::uint64_t span = std::uint64_t{1} << dn[i];
            idx[i] = (p.idx[i] << dn[i]) + (rest % span);
            rest /= span;
          }
          Cell c = make_child_cell(*dom, p, k, idx, t.res_[k], pruned);
          c.parent = static_cast<std::int64_t>(pj);
          cells.push_back(c);
        }
      }
      std::vector<std::uint64_t> keys(cells.size());
      for (std::size_t i = 0; i < cells.size(); ++i) keys[i] = pack(cells[i].idx, kb);
      if (!std::is_sorted(keys.begin(), keys.end())) {
        std::vector<std::size_t> order(cells.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
        std::vector<Cell> sorted;
        std::vector<std::uint64_t> skeys;
        sorted.reserve(cells.size());
        skeys.reserve(cells.size());
        for (auto o : order) {
          sorted.push_back(cells[o]);
          skeys.push_back(keys[o]);
        }
        cells.swap(sorted);
        keys.swap(skeys);
      }
      auto& start = t.child_start_[k - 1];
      auto& list = t.child_list_[k - 1];
      start.assign(parents.size() + 1, 0);
      for (const auto& c : cells) ++start[c.parent + 1];
      for (std::size_t i = 0; i < parents.size(); ++i) start[i + 1] += start[i];
      list.resize(cells.size());
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (std::size_t i = 0; i < cells.size(); ++i) list[fill[cells[i].parent]++] = static_cast<std::uint32_t>(i);
      total += cells.size();
      t.levels_[k] = std::move(cells);
      t.keys_[k] = std::move(keys);
    }
    return t;
  }
};

PartitionTree build_tree(std::shared_ptr<const DomainSpec> dom, int K, const TreeOptions& opt) {
  return TreeBuilder::build(std::move(dom), K, false, opt);
}

PartitionTree build_hset_tree(std::shared_ptr<const DomainSpec> dom, int K, const TreeOptions& opt) {
  return TreeBuilder::build(std::move(dom), K, true, opt);
}

std::vector<NearCount> near_cell_counts(const DomainSpec& dom, int K) {
  if (dom.psi_kind() != DomainSpec::PsiKind::hset_cusp) throw ConfigError("near-cell counts need an hset_cusp domain");
  if (K < 0) throw ParameterError("K must be >= 0");
  Resolutions res = tree_resolutions(dom, K, true);
  std::vector<NearCount> out;
  for (int k = 0; k <= K; ++k) {
    NearCount nc;
    nc.level = k;
    nc.n = res[k][0];
    nc.count = k == 0 ? 1 : dom.hset()->count_grid_cells_within(nc.n, std::ldexp(1.0, -nc.n));
    nc.scaled = static_cast<double>(nc.count) * dom.hset()->h(std::ldexp(1.0, -nc.n));
    out.push_back(nc);
  }
  return out;
}

std::vector<double> predicted_cell_counts(const DomainSpec& dom, int K, PartitionTree::Variant v) {
  bool pruned = v == PartitionTree::Variant::hset_pruned;
  Resolutions res = tree_resolutions(dom, K, pruned);
  int kb = dom.base_dim();
  std::vector<double> out(K + 1, 1.0);
  std::vector<NearCount> near;
  if (pruned) near = near_cell_counts(dom, K - 1 >= 0 ? K - 1 : 0);
  for (int k = 1; k <= K; ++k) {
    int shift = 0, full = 0;
    for (int i = 0; i < kb; ++i) {
      shift += res[k][i] - res[k - 1][i];
      full += res[k][i];
    }
    out[k] = pruned ? static_cast<double>(near[k - 1].count) * std::ldexp(1.0, shift) : std::ldexp(1.0, full);
  }
  return out;
}

namespace {

// Integral of (psi - level) over a base box by composite Gauss (4 panels x 4 nodes per axis).
double integrate_above(const DomainSpec& dom, const Box& b, double level) {
  if (dom.psi_kind() == DomainSpec::PsiKind::constant) {
    double v = 1.0;
    for (int i = 0; i < b.dim; ++i) v *= b.side(i);
    return (dom.psi(Vec{}) - level) * v;
  }
  const GaussRule& g = gauss_legendre(4);
  const int panels = 4;
  int kb = b.dim;
  int per_axis = panels * 4;
  int total = 1;
  for (int i = 0; i < kb; ++i) total *= per_axis;
  double sum = 0.0;
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    Vec x{};
    double w = 1.0;
    for (int i = 0; i < kb; ++i) {
      int q = rest % per_axis;
      rest /= per_axis;
      int pnl = q / 4, node = q % 4;
      double h = b.side(i) / panels;
      x[i] = b.lo[i] + h * (pnl + g.x[node]);
      w *= h * g.w[node];
    }
    sum += w * (dom.psi(x) - level);
  }
  return sum;
}

}  // namespace

double domain_measure(const DomainSpec& dom) {
  if (dom.psi_kind() == DomainSpec::PsiKind::constant) return dom.psi(Vec{});
  int kb = dom.base_dim();
  int split = kb == 1 ? 1024 : (kb == 2 ? 64 : 16);
  Box base = dom.base_box();
  double sum = 0.0;
  int total = 1;
  for (int i = 0; i < kb; ++i) total *= split;
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    Box b;
    b.dim = kb;
    for (int i = 0; i < kb; ++i) {
      int q = rest % split;
      rest /= split;
      b.lo[i] = base.lo[i] + static_cast<double>(q) / split;
      b.hi[i] = base.lo[i] + static_cast<double>(q + 1) / split;
    }
    sum += integrate_above(dom, b, 0.0);
  }
  return sum;
}

AuditReport partition_audit(const PartitionTree& tree) {
  const DomainSpec& dom = tree.domain();
  int K = tree.max_level();
  int kb = dom.base_dim();
  bool pruned = tree.variant() == PartitionTree::Variant::hset_pruned;
  AuditReport rep;
  rep.root_c_plus = tree.level(0)[0].c_plus;
  rep.defect_bound = std::ldexp(dom.base_area(), -K - 1);
  std::size_t bound = 1;
  for (const auto& m : dom.moduli()) bound <<= static_cast<int>(std::ceil(std::log2(m.a_star) - 1e-12));
  rep.branching_bound = bound;
  const auto& res = tree.resolutions();
  for (int k = 0; k <= K; ++k) {
    const auto& cells = tree.level(k);
    LevelAudit la;
    la.level = k;
    la.cells = cells.size();
    la.height_min = std::numeric_limits<double>::infinity();
    la.height_max = -la.height_min;
    la.volume_ratio_min = la.height_min;
    la.volume_ratio_max = -la.height_min;
    double scale = std::ldexp(1.0, -k);
    double denom = scale;
    for (const auto& m : dom.moduli()) denom *= m.eval(scale);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const Cell& c = cells[j];
      if (c.role == CellRole::near_gamma) ++la.near;
      double hgt = std::ldexp(c.c_plus - c.c_minus, k);
      la.height_min = std::min(la.height_min, hgt);
      la.height_max = std::max(la.height_max, hgt);
      if (k >= 1 && (hgt < 0.25 || hgt > 0.75)) ++rep.height_violations;
      double vol = tree.cell_volume(c);
      rep.covered_measure += vol;
      la.volume_ratio_min = std::min(la.volume_ratio_min, vol / denom);
      la.volume_ratio_max = std::max(la.volume_ratio_max, vol / denom);
      if (!(c.c_plus > c.c_minus)) {
        ++rep.tiling_violations;
        rep.overlap_measure += std::fabs(vol);
      }
      if (c.has_tail) rep.covered_measure += integrate_above(dom, tree.base_box(c), c.c_plus);
      bool top = k == K && (!pruned || c.role == CellRole::near_gamma);
      if (top) rep.covering_defect += integrate_above(dom, tree.base_box(c), c.c_plus);
      if (k < K) {
        std::size_t nc = tree.child_count(k, j);
        la.branching_max = std::max(la.branching_max, nc);
        if (k == 0) rep.root_branching = nc;
        else rep.max_branching = std::max(rep.max_branching, nc);
        bool expands = !pruned || c.role == CellRole::near_gamma;
        std::size_t expect = 1;
        for (int i = 0; i < kb; ++i) expect <<= (res[k + 1][i] - res[k][i]);
        if (nc != (expands ? expect : 0)) ++rep.tiling_violations;
        for (auto ch : tree.children(k, j)) {
          const Cell& cc = tree.level(k + 1)[ch];
          for (int i = 0; i < kb; ++i)
            if ((cc.idx[i] >> (res[k + 1][i] - res[k][i])) != c.idx[i]) {
              ++rep.tiling_violations;
              rep.overlap_measure += tree.cell_volume(cc);
              break;
            }
          if (cc.c_minus != c.c_plus) ++rep.chaining_violations;
        }
      }
    }
    // Strictly increasing keys within a level rule out duplicate base cells.
    for (std::size_t j = 1; j < cells.size(); ++j) {
      bool same = true;
      for (int i = 0; i < kb; ++i) same = same && cells[j].idx[i] == cells[j - 1].idx[i];
      if (same) ++rep.tiling_violations;
    }
    rep.levels.push_back(la);
  }
  rep.domain_measure = domain_measure(dom);
  return rep;
}

VolumeCheck monte_carlo_volume(const PartitionTree& tree, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw ParameterError("need at least two samples");
  const DomainSpec& dom = tree.domain();
  int d = dom.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec x{};
    for (int i = 0; i < d - 1; ++i) x[i] = dom.offset() + u(rng);
    x[d - 1] = 2.0 * u(rng);
    if (tree.locate(x)) ++hits;
  }
  double box = 2.0 * dom.base_area();
  double p = static_cast<double>(hits) / static_cast<double>(samples);
  VolumeCheck vc;
  vc.samples = samples;
  vc.estimate = box * p;
  vc.standard_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  double exact = 0.0;
  for (int k = 0; k <= tree.max_level(); ++k)
    for (const auto& c : tree.level(k)) {
      exact += tree.cell_volume(c);
      if (c.has_tail) exact += integrate_above(dom, tree.base_box(c), c.c_plus);
    }
  vc.exact = exact;
  vc.z = vc.standard_error > 0 ? (vc.estimate - exact) / vc.standard_error : 0.0;
  vc.within_3se = std::fabs(vc.estimate - exact) <= 3.0 * vc.standard_error;
  return vc;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_cells_csv(const PartitionTree& tree, std::ostream& out) {
  int kb = tree.domain().base_dim();
  out << "level,index,parent_index,role";
  for (int i = 1; i <= kb; ++i) out << ",base_lo_" << i;
  for (int i = 1; i <= kb; ++i) out << ",base_hi_" << i;
  out << ",c_minus,c_plus,tail_top\n";
  for (int k = 0; k <= tree.max_level(); ++k) {
    const auto& cells = tree.level(k);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const Cell& c = cells[j];
      Box b = tree.base_box(c);
      out << k << ',' << (j + 1) << ',' << (c.parent + 1) << ',' << role_name(c.role);
      for (int i = 0; i < kb; ++i) out << ',' << num(b.lo[i]);
      for (int i = 0; i < kb; ++i) out << ',' << num(b.hi[i]);
      out << ',' << num(c.c_minus) << ',' << num(c.c_plus) << ',';
      if (c.has_tail) out << num(c.tail_top);
      out << '\n';
    }
  }
}

}  // namespace cusp
