#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cusp/geometry.hpp"

namespace cusp {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // in log e
  std::size_t points = 0;
};

// Least-squares slope of log e against log n.
FitResult fit_rate(const std::vector<double>& n, const std::vector<double>& e);

// Profile rho: 0 on [0, 1/2], 1 on [1, inf), smoothstep of order s in between; j-th derivative.
double bump_profile(double tau, int s, int j = 0);

class BumpFamily {
 public:
  static BumpFamily build(const DomainSpec& dom, int k, int r);

  int level() const { return k_; }
  int r() const { return r_; }
  std::size_t size() const { return cubes_.size(); }
  const Box& cube(std::size_t j) const { return cubes_[j]; }
  double b_k() const { return b_k_; }
  // Lower bound for the distance from the cube boundaries to the set.
  double boundary_gap() const { return gap_; }
  const DomainSpec& domain() const { return *dom_; }

  // j-th derivative of rho_k(t) = rho(2 (t - b_k) / (2 - b_k)).
  double rho_k(double t, int j = 0) const;
  // phi_{k,j}(x) for x in the domain.
  double eval(std::size_t j, const Vec& x) const;
  // Max of psi over sampled cube boundaries; must stay below b_k.
  double max_boundary_psi(int per_edge) const;
  // Max |rho_k^{(i)}| for i = 0..r at the lower end of the transition layer.
  double boundary_derivative_max() const;

  // Measure of {x' in Q_{k,j} : psi(x') > t} for b_k < t < 2 (the same for every j).
  double superlevel_measure(double t) const;

 private:
  std::shared_ptr<const DomainSpec> dom_;
  int k_ = 1;
  int r_ = 1;
  double b_k_ = 0.0;
  double gap_ = 0.0;
  std::vector<Box> cubes_;
};

struct BumpNorms {
  int k = 0;
  std::size_t count = 0;
  double b_k = 0.0;
  double lq = 0.0;         // ||phi||_{L_q}
  double lp = 0.0;         // ||phi||_{L_p}
  double grad_lp = 0.0;    // ||grad^r phi||_{L_p}
  double separation = 0.0; // L_q distance of two normalized bumps
};

// Norms by layer-cake integration against the exact superlevel measure.
BumpNorms bump_norms(const BumpFamily& fam, double p, double q);
// Same quantities by direct column quadrature over one cube, as an independent check.
BumpNorms bump_norms_direct(const BumpFamily& fam, std::size_t j, double p, double q);

struct NormScaling {
  std::vector<BumpNorms> rows;
  double lq_slope = 0.0, lq_predicted = 0.0;
  double grad_slope = 0.0, grad_predicted = 0.0;
  double packing_slope = 0.0, packing_predicted = 0.0;  // against log #bumps
};

NormScaling norm_scaling(const DomainSpec& dom, int k_min, int k_max, double p, double q, int r);

struct WidthEstimate {
  int n = 0;
  double value = 0.0;
  std::string method;
};

// Widths of the ellipsoid with the given semi-axes: d_n = (n+1)-th largest.
std::vector<WidthEstimate> ellipsoid_widths(std::vector<double> semi_axes, int n_max);
// L2 widths of the discrete W^r_2 ball {u : |u|^2 + u^T L^r u <= 1} with L the grid Laplacian of [0,1].
std::vector<WidthEstimate> interval_widths(int grid, int r, int n_max);
// Same on the grid points inside the domain (Neumann graph Laplacian, spacing 1/grid).
std::vector<WidthEstimate> domain_widths(const DomainSpec& dom, int r, int grid, int n_max);

}  // namespace cusp
