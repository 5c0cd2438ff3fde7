#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cusp/hset.hpp"
#include "cusp/types.hpp"

namespace cusp {

struct BoundaryModulus {
  enum class Kind { power, power_log };
  Kind kind = Kind::power;
  double sigma = 1.0;
  double scale = 1.0;  // prefactor a in (0, 1]
  double beta = 0.0;   // power_log: a t^sigma ln(e/t)^beta
  double a_star = 0.0; // 0 means "derive on construction"

  static BoundaryModulus power(double sigma, double scale = 1.0);
  static BoundaryModulus power_log(double sigma, double scale, double beta);

  double eval(double t) const;
  // Checks phi(t) <= a_star t and phi(2t) <= a_star phi(t) on t = 2^-j, j = 0..40; fills a_star if unset.
  void validate();
};

struct HolderReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max |psi(x') - psi(y')| / t
  bool passed = false;
};

class DomainSpec {
 public:
  enum class PsiKind { constant, hset_cusp, explicit_sample };

  static DomainSpec constant(int d, double value, std::vector<BoundaryModulus> moduli, double offset = 0.0);
  // Moduli default to a t^sigma with a fitted by fit_hset_prefactor.
  static DomainSpec hset_cusp(double sigma, std::shared_ptr<const HSet> g,
                              std::vector<BoundaryModulus> moduli = {});
  // values on the (N+1)^(d-1) uniform grid over the base cube, first axis slowest.
  static DomainSpec explicit_sample(int d, int resolution, std::vector<double> values,
                                    std::vector<BoundaryModulus> moduli, double offset = 0.0);

  int dim() const { return d_; }
  int base_dim() const { return d_ - 1; }
  const std::vector<BoundaryModulus>& moduli() const { return moduli_; }
  PsiKind psi_kind() const { return kind_; }
  double sigma() const { return sigma_; }
  const HSet* hset() const { return hset_.get(); }
  std::shared_ptr<const HSet> hset_ptr() const { return hset_; }
  double offset() const { return offset_; }
  Box base_box() const;
  double base_area() const { return 1.0; }

  double psi(const Vec& xprime) const;
  bool contains(const Vec& x) const;
  // Bounds of psi over a closed base box. The infimum is exact for constant and explicit
  // kinds and a lower bound at most `tol` below the true value for h-set cusps.
  double psi_inf(const Box& b, double tol = 1e-6) const;
  double psi_sup(const Box& b) const;
  // Cheap upper bound on sup - inf of psi over the box.
  double psi_oscillation(const Box& b) const;

  HolderReport holder_check(std::size_t pairs, std::uint64_t seed) const;
  void set_moduli(std::vector<BoundaryModulus> moduli);

  std::string to_json() const;
  static DomainSpec from_json(const std::string& text);

 private:
  void validate();
  double sample_at(const std::vector<int>& idx) const;

  int d_ = 2;
  std::vector<BoundaryModulus> moduli_;
  PsiKind kind_ = PsiKind::constant;
  double value_ = 2.0;
  double sigma_ = 1.0;
  std::shared_ptr<const HSet> hset_;
  int resolution_ = 0;
  std::vector<double> samples_;
  double offset_ = 0.0;
};

// Largest a in {1, 1/2, 1/4, ...} above 1/sigma for which the sampled check passes, else 1/sigma.
double fit_hset_prefactor(double sigma, std::shared_ptr<const HSet> g, std::size_t pairs, std::uint64_t seed);

}  // namespace cusp
