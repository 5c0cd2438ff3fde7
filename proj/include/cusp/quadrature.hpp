#pragma once

#include <vector>

namespace cusp {

// Gauss-Legendre rule mapped to [0,1]; weights sum to 1.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

// Values of sqrt(2j+1) P_j(2x-1), j = 0..nmax, orthonormal on [0,1].
void shifted_legendre(int nmax, double x, double* out);

}  // namespace cusp
