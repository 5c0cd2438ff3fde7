#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "cusp/fields.hpp"
#include "cusp/partition.hpp"

namespace cusp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tensor-product shifted Legendre basis of Q_{r-1} on [0,1]^d, orthonormal in the mean-square inner product.
class PolyBasis {
 public:
  PolyBasis(int r, int d);
  int r() const { return r_; }
  int dim() const { return d_; }
  std::size_t size() const { return alpha_.size(); }
  const MultiIndex& alpha(std::size_t i) const { return alpha_[i]; }
  // Values of all basis functions at u in the unit cube.
  void eval(const Vec& u, double* out) const;

 private:
  int r_;
  int d_;
  std::vector<MultiIndex> alpha_;
};

// A box, or the column {x in box: x_d < psi(x')} whose box spans [lower, sup psi] vertically.
struct Region {
  bool column = false;
  Box box;
};

struct QuadOptions {
  int order = 0;   // Gauss nodes per axis; 0 means max(2r, 8)
  int panels = 4;  // initial composite panels per base axis for columns
  // Column panels are halved while (panel volume / base volume) * osc(psi) / column height exceeds this.
  double psi_tol = 1e-3;
  int max_panel_depth = 24;
  int grid = 33;   // points per axis for sup-norm grids
};

struct QuadPoint {
  Vec x;
  double w;
};

// Nodes with weights summing to the region measure.
std::vector<QuadPoint> region_nodes(const DomainSpec* dom, const Region& reg, int order, const QuadOptions& opt);
double region_measure(const DomainSpec* dom, const Region& reg, const QuadOptions& opt = {});
bool region_contains(const DomainSpec* dom, const Region& reg, const Vec& x);

// Maps x to the unit cube of the region's box.
Vec normalize(const Box& b, const Vec& x);
double eval_poly(const PolyBasis& basis, const Box& b, const std::vector<double>& coeffs, const Vec& x);

// L2(region) projection onto Q_{r-1} in the normalized basis of the region's box.
std::vector<double> project_region(const FieldOracle& f, const DomainSpec* dom, const Region& reg,
                                   const PolyBasis& basis, const QuadOptions& opt = {});
std::vector<double> project_box(const FieldOracle& f, const Box& box, int r, const QuadOptions& opt = {});
std::vector<double> project_cell(const FieldOracle& f, const PartitionTree& tree, const Cell& cell, int r,
                                 const QuadOptions& opt = {});

struct ErrorValue {
  double value = 0.0;
  bool estimated = false;  // true when quadrature is not exact for the integrand
};

// ||f - P||_{L_q(region)}; q = kInf uses a grid maximum.
ErrorValue region_error(const FieldOracle& f, const DomainSpec* dom, const Region& reg, const PolyBasis& basis,
                        const std::vector<double>& coeffs, double q, const QuadOptions& opt = {});
ErrorValue cell_error(const FieldOracle& f, const std::vector<double>& coeffs, const Box& box, int r, double q,
                      const QuadOptions& opt = {});
// ||f||_{L_q} over a disjoint list of boxes.
double lq_norm(const FieldOracle& f, const std::vector<Box>& region, double q, const QuadOptions& opt = {});

class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::shared_ptr<const DomainSpec> dom, int r);
  void add(const Region& reg, std::vector<double> coeffs);
  std::size_t size() const { return regions_.size(); }
  const Region& region(std::size_t i) const { return regions_[i]; }
  const std::vector<double>& coeffs(std::size_t i) const { return coeffs_[i]; }
  // Value at x, or NaN outside every piece.
  double eval(const Vec& x) const;

 private:
  std::shared_ptr<const DomainSpec> dom_;
  std::shared_ptr<const PolyBasis> basis_;
  std::vector<Region> regions_;
  std::vector<std::vector<double>> coeffs_;
};

struct AdaptiveOptions {
  int r = 1;
  double p = 2.0;
  double q = 2.0;
  QuadOptions quad;
  int max_level = 0;                   // deepest vertical cut level; 0 means 40
  std::vector<std::uint64_t> record;   // budgets at which to snapshot the error
};

struct BudgetPoint {
  std::uint64_t budget = 0;
  std::uint64_t pieces = 0;
  double error = 0.0;
  double fringe_defect = 0.0;  // part of the error on pieces at the depth cap
};

struct AdaptiveResult {
  std::vector<BudgetPoint> trace;
  PiecewisePoly approx;
  double error = 0.0;
  double fringe_defect = 0.0;
  std::uint64_t pieces = 0;
};

// Greedy refinement of the cell tree (built lazily) and of boxes inside cells, splitting the worst piece until
// `budget` pieces exist.
AdaptiveResult adaptive_approximate(const FieldOracle& f, std::shared_ptr<const DomainSpec> dom, std::uint64_t budget,
                                    const AdaptiveOptions& opt = {});

// Region of the subtree rooted at the level-k cell whose base has integer corner idx.
Region subtree_region(const DomainSpec& dom, int k, const Index& idx);

struct LocalRatioSample {
  int k0 = 0;
  Index idx{};
  bool on_gamma_path = false;
  double error = 0.0;
  double seminorm = 0.0;
  double scale = 0.0;
  double ratio = 0.0;
};

struct LocalRatioReport {
  std::vector<LocalRatioSample> samples;
  std::vector<double> ratio_max_per_level;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

// Ratio of the subtree projection error to the scale 2^{-k(r+1/q-1/p)} (prod phi_i(2^-k))^{1/q-1/p} ||grad^r f||_p.
LocalRatioReport local_ratio_check(const FieldOracle& f, const DomainSpec& dom, int r, double p, double q, int k_max,
                          int samples_per_level, std::uint64_t seed, const QuadOptions& opt = {});

// Composite-Gauss integral of |d^alpha f|^p over a region, max over |alpha| = r, to the power 1/p.
double region_seminorm(const FieldOracle& f, const DomainSpec* dom, const Region& reg, int r, double p,
                       const QuadOptions& opt = {});

}  // namespace cusp
