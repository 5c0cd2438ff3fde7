#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cusp/types.hpp"

namespace cusp {

struct HSetCell {
  int level = 0;
  Vec center{};
  double halfwidth = 0.0;
  double mass = 0.0;
};

struct RegularityReport {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double spread = 0.0;  // ratio_max / ratio_min
  double c_star = 0.0;
  bool passed = false;
  std::size_t evaluations = 0;
};

// Self-similar Cantor set or coordinate slab inside the cube origin + [0,1]^k, k = d - 1.
class HSet {
 public:
  enum class Kind { cantor, plane };

  static HSet build(double theta, int d, int depth, Kind kind, double origin = 0.0);

  Kind kind() const { return kind_; }
  int ambient_dim() const { return k_; }
  int domain_dim() const { return k_ + 1; }
  double theta() const { return theta_; }
  int m() const { return m_; }
  double lambda() const { return lambda_; }
  int depth() const { return depth_; }
  double origin() const { return origin_; }
  double c_star() const { return c_star_; }
  void set_c_star(double c) { c_star_ = c; }

  // Gap between the depth-K approximant distance and the distance to the limit set.
  double tolerance() const;

  std::uint64_t cell_count(int level) const;
  HSetCell cell(int level, std::uint64_t index) const;
  std::vector<HSetCell> cells(int level) const;
  double h(double t) const;

  // A point of the limit set inside the given level-K cell.
  Vec limit_point(std::uint64_t index_at_depth) const;

  double distance(const Vec& x) const;
  double box_distance(const Box& b) const;
  bool box_within(const Box& b, double s) const;
  // Upper bound U for sup_{x in b} distance(x) with U^power - sup^power <= tol.
  double box_max_distance(const Box& b, double tol, double power = 1.0) const;

  // Number of cells of the dyadic grid with side 2^-n over origin + [0,1]^k at distance <= s.
  std::uint64_t count_grid_cells_within(int n, double s) const;

  // mu(B_t(x)): total mass of level-K cells meeting the open l-infinity ball.
  double ball_mass(const Vec& x, double t) const;
  RegularityReport regularity_check(std::size_t samples, const std::vector<double>& t_grid,
                                    std::uint64_t seed, int threads = 1) const;

  std::string to_json() const;
  static HSet from_json(const std::string& text);

 private:
  Box root_box() const;
  Box cube_box(const Vec& c, double hw) const;
  Vec child_center(const Vec& c, int level, int j) const;

  Kind kind_ = Kind::cantor;
  int k_ = 1;
  double theta_ = 0.5;
  int m_ = 2;
  double lambda_ = 0.25;
  int depth_ = 1;
  double origin_ = 0.0;
  double c_star_ = 8.0;
  int children_ = 2;                // m^k
  std::vector<Vec> offsets_;        // u_j = (i + 1/2)/m - 1/2 per child
  std::vector<double> scale_;       // lambda^level
  std::vector<double> hull_;
};

}  // namespace cusp
