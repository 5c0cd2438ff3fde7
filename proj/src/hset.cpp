#include "cusp/hset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "cusp/error.hpp"
#include "json.hpp"

namespace cusp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest value of max(0, |x - c| - hw) over x in [lo, hi].
inline double far_gap(double lo, double hi, double c, double hw) {
  return std::max(0.0, std::max(std::fabs(lo - c), std::fabs(hi - c)) - hw);
}

struct Cand {
  Vec c;
  int level;
};

}  // namespace

HSet HSet::build(double theta, int d, int depth, Kind kind, double origin) {
  if (d < 2 || d > kMaxDim) throw ParameterError("dimension d must be in [2, " + std::to_string(kMaxDim) + "]");
  if (!std::isfinite(origin)) throw ParameterError("origin must be finite");
  HSet g;
  g.kind_ = kind;
  g.k_ = d - 1;
  g.theta_ = theta;
  g.origin_ = origin;
  if (kind == Kind::plane) {
    if (theta != std::floor(theta) || theta < 1 || theta > d - 2)
      throw ParameterError("plane h-set needs integer theta in {1,...,d-2}");
    g.depth_ = std::max(depth, 0);
    g.m_ = 1;
    g.lambda_ = 0.0;
    g.children_ = 1;
    return g;
  }
  if (!(theta > 0.0)) throw ParameterError("cantor h-set needs theta > 0");
  if (!(theta < d - 1))
    throw ParameterError("cantor h-set needs theta < d-1; theta in [d-1, d) is unsupported");
  if (depth < 1) throw ParameterError("depth must be >= 1");
  if (depth > 60) throw ParameterError("depth must be <= 60");
  int m = 2;
  while (!(std::pow(m, -static_cast<double>(g.k_) / theta) < 1.0 / m)) {
    if (++m > 1024) throw ParameterError("no admissible subdivision count");
  }
  g.m_ = m;
  g.lambda_ = std::pow(m, -static_cast<double>(g.k_) / theta);
  g.depth_ = depth;
  g.children_ = 1;
  for (int i = 0; i < g.k_; ++i) g.children_ *= m;
  if (static_cast<double>(g.children_) > 64) throw ParameterError("too many subcubes per level");
  g.offsets_.resize(g.children_);
  for (int j = 0; j < g.children_; ++j) {
    Vec u{};
    int rest = j;
    for (int i = g.k_ - 1; i >= 0; --i) {
      int digit = rest % m;
      rest /= m;
      u[i] = (digit + 0.5) / m - 0.5;
    }
    g.offsets_[j] = u;
  }
  g.scale_.resize(depth + 1);
  g.scale_[0] = 1.0;
  for (int l = 1; l <= depth; ++l) g.scale_[l] = g.scale_[l - 1] * g.lambda_;
  // Half-width of the bounding box of the depth-K approximant inside a level-l cube.
  double umax = 0.5 - 0.5 / m;
  g.hull_.assign(depth + 1, 0.0);
  g.hull_[depth] = 0.5 * g.scale_[depth];
  for (int l = depth - 1; l >= 0; --l) g.hull_[l] = g.hull_[l + 1] + g.scale_[l] * umax;
  return g;
}

double HSet::tolerance() const { return kind_ == Kind::plane ? 0.0 : 0.5 * scale_[depth_]; }

double HSet::h(double t) const { return std::pow(t, theta_); }

std::uint64_t HSet::cell_count(int level) const {
  if (kind_ == Kind::plane) throw ParameterError("plane h-sets have no cell hierarchy");
  if (level < 0 || level > depth_) throw ParameterError("level outside [0, depth]");
  double c = std::pow(static_cast<double>(children_), level);
  if (c > 9.0e18) throw SizeError("cell count exceeds 64-bit range");
  std::uint64_t n = 1;
  for (int l = 0; l < level; ++l) n *= static_cast<std::uint64_t>(children_);
  return n;
}

Box HSet::root_box() const {
  Box b;
  b.dim = k_;
  for (int i = 0; i < k_; ++i) {
    b.lo[i] = origin_;
    b.hi[i] = origin_ + 1.0;
  }
  return b;
}

Box HSet::cube_box(const Vec& c, double hw) const {
  Box b;
  b.dim = k_;
  for (int i = 0; i < k_; ++i) {
    b.lo[i] = c[i] - hw;
    b.hi[i] = c[i] + hw;
  }
  return b;
}

Vec HSet::child_center(const Vec& c, int level, int j) const {
  Vec out = c;
  for (int i = 0; i < k_; ++i) out[i] += scale_[level] * offsets_[j][i];
  return out;
}

HSetCell HSet::cell(int level, std::uint64_t index) const {
  std::uint64_t count = cell_count(level);
  if (index >= count) throw ParameterError("cell index out of range");
  std::vector<int> digits(level);
  for (int l = level - 1; l >= 0; --l) {
    digits[l] = static_cast<int>(index % children_);
    index /= children_;
  }
  HSetCell cell;
  cell.level = level;
  for (int i = 0; i < k_; ++i) cell.center[i] = origin_ + 0.5;
  for (int l = 0; l < level; ++l) cell.center = child_center(cell.center, l, digits[l]);
  cell.halfwidth = 0.5 * scale_[level];
  cell.mass = std::pow(static_cast<double>(children_), -level);
  return cell;
}

std::vector<HSetCell> HSet::cells(int level) const {
  std::uint64_t n = cell_count(level);
  if (n > 20'000'000ULL) throw SizeError("too many cells to enumerate at level " + std::to_string(level));
  std::vector<HSetCell> out;
  out.reserve(n);
  // Breadth-first expansion keeps lexicographic digit order.
  std::vector<Vec> centers{Vec{}};
  for (int i = 0; i < k_; ++i) centers[0][i] = origin_ + 0.5;
  for (int l = 0; l < level; ++l) {
    std::vector<Vec> next;
    next.reserve(centers.size() * children_);
    for (const auto& c : centers)
      for (int j = 0; j < children_; ++j) next.push_back(child_center(c, l, j));
    centers.swap(next);
  }
  double mass = std::pow(static_cast<double>(children_), -level);
  for (const auto& c : centers) out.push_back({level, c, 0.5 * scale_[level], mass});
  return out;
}

Vec HSet::limit_point(std::uint64_t index_at_depth) const {
  HSetCell c = cell(depth_, index_at_depth);
  Vec x = c.center;
  for (int i = 0; i < k_; ++i) x[i] += scale_[depth_] * offsets_[0][i] / (1.0 - lambda_);
  return x;
}

double HSet::distance(const Vec& x) const {
  if (kind_ == Kind::plane) {
    int t = static_cast<int>(theta_);
    double d = 0.0;
    for (int i = 0; i < t; ++i) d = std::max({d, origin_ - x[i], x[i] - origin_ - 1.0});
    for (int i = t; i < k_; ++i) d = std::max(d, std::fabs(x[i] - origin_ - 0.5));
    return d;
  }
  double best = kInf;
  auto rec = [&](auto&& self, const Vec& c, int level) -> void {
    double hw = hull_[level];
    double d = linf_point_box(x, cube_box(c, hw));
    if (d >= best) return;
    if (level == depth_) {
      best = d;
      return;
    }
    std::array<std::pair<double, int>, 64> order;
    std::array<Vec, 64> kids;
    double chw = hull_[level + 1];
    for (int j = 0; j < children_; ++j) {
      kids[j] = child_center(c, level, j);
      order[j] = {linf_point_box(x, cube_box(kids[j], chw)), j};
    }
    std::sort(order.begin(), order.begin() + children_);
    for (int j = 0; j < children_; ++j) {
      if (order[j].first >= best) break;
      self(self, kids[order[j].second], level + 1);
    }
  };
  Vec c{};
  for (int i = 0; i < k_; ++i) c[i] = origin_ + 0.5;
  rec(rec, c, 0);
  return best;
}

double HSet::box_distance(const Box& b) const {
  if (kind_ == Kind::plane) {
    int t = static_cast<int>(theta_);
    double d = 0.0;
    for (int i = 0; i < t; ++i) d = std::max({d, origin_ - b.hi[i], b.lo[i] - origin_ - 1.0});
    double c = origin_ + 0.5;
    for (int i = t; i < k_; ++i) d = std::max({d, b.lo[i] - c, c - b.hi[i]});
    return d;
  }
  double best = kInf;
  auto rec = [&](auto&& self, const Vec& c, int level) -> void {
    double d = linf_box_box(b, cube_box(c, hull_[level]));
    if (d >= best) return;
    if (level == depth_) {
      best = d;
      return;
    }
    for (int j = 0; j < children_; ++j) self(self, child_center(c, level, j), level + 1);
  };
  Vec c{};
  for (int i = 0; i < k_; ++i) c[i] = origin_ + 0.5;
  rec(rec, c, 0);
  return best;
}

bool HSet::box_within(const Box& b, double s) const {
  if (kind_ == Kind::plane) return box_distance(b) <= s;
  auto rec = [&](auto&& self, const Vec& c, int level) -> bool {
    double hw = hull_[level];
    double d = linf_box_box(b, cube_box(c, hw));
    if (d > s) return false;
    if (level == depth_ || d + 2.0 * hw <= s) return true;
    for (int j = 0; j < children_; ++j)
      if (self(self, child_center(c, level, j), level + 1)) return true;
    return false;
  };
  Vec c{};
  for (int i = 0; i < k_; ++i) c[i] = origin_ + 0.5;
  return rec(rec, c, 0);
}

double HSet::box_max_distance(const Box& b, double tol, double power) const {
  if (kind_ == Kind::plane) {
    int t = static_cast<int>(theta_);
    double d = 0.0;
    for (int i = 0; i < t; ++i) d = std::max({d, origin_ - b.lo[i], b.hi[i] - origin_ - 1.0});
    double c = origin_ + 0.5;
    for (int i = t; i < k_; ++i) d = std::max({d, std::fabs(b.lo[i] - c), std::fabs(b.hi[i] - c)});
    return d;
  }
  // Lower bounds come from box centers; upper bounds from the Lipschitz estimate and the
  // farthest gap to the cube nearest the center.
  auto nearest = [&](const Vec& x, Vec& cube) {
    double best = kInf;
    auto rec = [&](auto&& self, const Vec& c, int level) -> void {
      double d = linf_point_box(x, cube_box(c, hull_[level]));
      if (d >= best) return;
      if (level == depth_) {
        best = d;
        cube = c;
        return;
      }
      std::array<std::pair<double, int>, 64> order;
      std::array<Vec, 64> kids;
      double chw = hull_[level + 1];
      for (int j = 0; j < children_; ++j) {
        kids[j] = child_center(c, level, j);
        order[j] = {linf_point_box(x, cube_box(kids[j], chw)), j};
      }
      std::sort(order.begin(), order.begin() + children_);
      for (int j = 0; j < children_; ++j) {
        if (order[j].first >= best) break;
        self(self, kids[order[j].second], level + 1);
      }
    };
    Vec c{};
    for (int i = 0; i < k_; ++i) c[i] = origin_ + 0.5;
    rec(rec, c, 0);
    return best;
  };
  const double leaf_hw = 0.5 * scale_[depth_];
  struct Item {
    double ub;
    Box box;
    bool operator<(const Item& o) const { return ub < o.ub; }
  };
  auto bounds = [&](const Box& s, double& lo) {
    Vec x{}, cube{};
    double half = 0.0;
    for (int i = 0; i < k_; ++i) {
      x[i] = 0.5 * (s.lo[i] + s.hi[i]);
      half = std::max(half, 0.5 * s.side(i));
    }
    lo = nearest(x, cube);
    double f = 0.0;
    for (int i = 0; i < k_; ++i) f = std::max(f, far_gap(s.lo[i], s.hi[i], cube[i], leaf_hw));
    return std::min(lo + half, f);
  };
  double best_lower = 0.0;
  std::priority_queue<Item> heap;
  heap.push({bounds(b, best_lower), b});
  const int max_iter = 100000;
  for (int it = 0; it < max_iter && !heap.empty(); ++it) {
    Item top = heap.top();
    if (std::pow(top.ub, power) <= std::pow(best_lower, power) + tol) return std::max(top.ub, best_lower);
    heap.pop();
    int nchild = 1 << k_;
    for (int mask = 0; mask < nchild; ++mask) {
      Box s = top.box;
      for (int i = 0; i < k_; ++i) {
        double mid = 0.5 * (top.box.lo[i] + top.box.hi[i]);
        if (mask & (1 << i)) s.lo[i] = mid; else s.hi[i] = mid;
      }
      double lo = 0.0;
      double ub = std::min(top.ub, bounds(s, lo));
      best_lower = std::max(best_lower, lo);
      if (ub > best_lower) heap.push({ub, s});
    }
  }
  return heap.empty() ? best_lower : std::max(heap.top().ub, best_lower);
}

std::uint64_t HSet::count_grid_cells_within(int n, double s) const {
  if (n < 0 || n > 62) throw ParameterError("grid resolution out of range");
  double h = std::ldexp(1.0, -n);
  if (kind_ == Kind::plane) {
    // Distance is a max of per-axis gaps, so the count factorizes.
    int t = static_cast<int>(theta_);
    std::uint64_t total = 1;
    std::uint64_t cells = std::uint64_t{1} << n;
    for (int i = 0; i < k_; ++i) {
      if (i < t) {
        total *= cells;
        continue;
      }
      std::uint64_t axis = 0;
      double c = 0.5;
      double reach_lo = c - s, reach_hi = c + s;
      // cells [j h, (j+1) h] meeting [c - s, c + s]
      double jlo = std::max(0.0, std::ceil(reach_lo / h) - 1.0);
      double jhi = std::min(static_cast<double>(cells) - 1.0, std::floor(reach_hi / h));
      for (double j = jlo; j <= jhi; j += 1.0)
        if (j * h <= reach_hi && (j + 1.0) * h >= reach_lo) ++axis;
      total *= axis;
    }
    return total;
  }
  std::vector<Cand> pool;
  pool.reserve(1 << 16);
  pool.push_back({Vec{}, 0});
  for (int i = 0; i < k_; ++i) pool[0].c[i] = origin_ + 0.5;
  std::uint64_t count = 0;
  const int nchild = 1 << k_;

  auto exact = [&](const Box& b, const Cand& start) {
    auto rec = [&](auto&& self, const Vec& c, int level) -> bool {
      double hw = hull_[level];
      double d = linf_box_box(b, cube_box(c, hw));
      if (d > s) return false;
      if (level == depth_ || d + 2.0 * hw <= s) return true;
      for (int j = 0; j < children_; ++j)
        if (self(self, child_center(c, level, j), level + 1)) return true;
      return false;
    };
    return rec(rec, start.c, start.level);
  };

  // Quadtree descent; each node owns the slice [begin, end) of still-relevant cubes.
  auto node = [&](auto&& self, const Box& b, int level, std::size_t begin, std::size_t end) -> void {
    double side = std::ldexp(1.0, -level);
    std::size_t mine = pool.size();
    for (std::size_t i = begin; i < end; ++i) {
      Cand cd = pool[i];
      double hw = hull_[cd.level];
      double d = linf_box_box(b, cube_box(cd.c, hw));
      if (d > s) continue;
      if (cd.level < depth_ && scale_[cd.level] > side && level < n) {
        for (int j = 0; j < children_; ++j) {
          Vec cc = child_center(cd.c, cd.level, j);
          if (linf_box_box(b, cube_box(cc, hull_[cd.level + 1])) <= s)
            pool.push_back({cc, cd.level + 1});
        }
      } else {
        pool.push_back(cd);
      }
    }
    std::size_t mine_end = pool.size();
    if (mine_end > mine) {
      if (level == n) {
        for (std::size_t i = mine; i < mine_end; ++i)
          if (exact(b, pool[i])) {
            ++count;
            break;
          }
      } else {
        for (int mask = 0; mask < nchild; ++mask) {
          Box c = b;
          for (int i = 0; i < k_; ++i) {
            double mid = 0.5 * (b.lo[i] + b.hi[i]);
            if (mask & (1 << i)) c.lo[i] = mid; else c.hi[i] = mid;
          }
          self(self, c, level + 1, mine, mine_end);
        }
      }
    }
    pool.resize(mine);
  };
  node(node, root_box(), 0, 0, 1);
  return count;
}

double HSet::ball_mass(const Vec& x, double t) const {
  if (kind_ == Kind::plane) {
    int th = static_cast<int>(theta_);
    double d = 0.0;
    for (int i = th; i < k_; ++i) d = std::max(d, std::fabs(x[i] - origin_ - 0.5));
    if (d >= t) return 0.0;
    double mass = 1.0;
    for (int i = 0; i < th; ++i) {
      double lo = std::max(origin_, x[i] - t), hi = std::min(origin_ + 1.0, x[i] + t);
      mass *= std::max(0.0, hi - lo);
    }
    return mass;
  }
  double total = 0.0;
  auto rec = [&](auto&& self, const Vec& c, int level) -> void {
    double hw = hull_[level];
    Box cb = cube_box(c, hw);
    if (linf_point_box(x, cb) >= t) return;
    double far = 0.0;
    for (int i = 0; i < k_; ++i) far = std::max(far, std::fabs(x[i] - c[i]) + hw);
    if (far < t || level == depth_) {
      total += std::pow(static_cast<double>(children_), -level);
      return;
    }
    for (int j = 0; j < children_; ++j) self(self, child_center(c, level, j), level + 1);
  };
  Vec c{};
  for (int i = 0; i < k_; ++i) c[i] = origin_ + 0.5;
  rec(rec, c, 0);
  return total;
}

RegularityReport HSet::regularity_check(std::size_t samples, const std::vector<double>& t_grid,
                                        std::uint64_t seed, int threads) const {
  if (samples == 0) throw ParameterError("samples must be positive");
  if (t_grid.empty()) throw ParameterError("t grid is empty");
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 1.0)) throw ParameterError("t grid entries must lie in (0,1]");
  std::mt19937_64 rng(seed);
  std::vector<Vec> points(samples);
  if (kind_ == Kind::plane) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int th = static_cast<int>(theta_);
    for (auto& x : points) {
      for (int i = 0; i < k_; ++i) x[i] = origin_ + (i < th ? u(rng) : 0.5);
    }
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, cell_count(depth_) - 1);
    for (auto& x : points) x = limit_point(pick(rng));
  }
  std::vector<double> lo(samples, kInf), hi(samples, 0.0);
  parallel_for(samples, threads, [&](std::size_t s) {
    for (double t : t_grid) {
      double r = ball_mass(points[s], t) / h(t);
      lo[s] = std::min(lo[s], r);
      hi[s] = std::max(hi[s], r);
    }
  });
  RegularityReport rep;
  rep.ratio_min = *std::min_element(lo.begin(), lo.end());
  rep.ratio_max = *std::max_element(hi.begin(), hi.end());
  rep.spread = rep.ratio_max / rep.ratio_min;
  rep.c_star = c_star_;
  rep.passed = rep.spread <= c_star_;
  rep.evaluations = samples * t_grid.size();
  return rep;
}

std::string HSet::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_ == Kind::cantor ? "cantor" : "plane";
  j["theta"] = theta_;
  j["dim"] = k_ + 1;
  j["depth"] = depth_;
  j["origin"] = origin_;
  j["c_star"] = c_star_;
  if (kind_ == Kind::cantor) {
    j["m"] = m_;
    j["lambda"] = lambda_;
  }
  return j.dump();
}

HSet HSet::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("invalid h-set JSON: ") + e.what());
  }
  static const char* allowed[] = {"kind", "theta", "dim", "depth", "origin", "c_star", "m", "lambda"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(std::begin(allowed), std::end(allowed), it.key()) == std::end(allowed))
      throw ConfigError("unknown h-set key '" + it.key() + "'");
  try {
    std::string kind = j.at("kind").get<std::string>();
    Kind k;
    if (kind == "cantor") k = Kind::cantor;
    else if (kind == "plane") k = Kind::plane;
    else throw ConfigError("unknown h-set kind '" + kind + "'");
    HSet g = build(j.at("theta").get<double>(), j.at("dim").get<int>(), j.value("depth", 1), k,
                   j.value("origin", 0.0));
    if (j.contains("c_star")) g.set_c_star(j["c_star"].get<double>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed h-set JSON: ") + e.what());
  }
}

}  // namespace cusp
