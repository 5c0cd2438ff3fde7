#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cusp {

// Rooted tree with vertex weights; parent[i] = -1 marks the root.
struct WeightedTree {
  std::vector<int> parent;
  std::vector<double> g;
  std::vector<double> v;
  double p = 2.0;
  double q = 2.0;

  std::size_t size() const { return parent.size(); }
  // Throws unless the parent links form a single rooted tree and g, v >= 0.
  void validate() const;
  // Vertices ordered so that parents precede children.
  std::vector<int> topological_order() const;
  std::vector<int> depths() const;

  std::string to_json() const;
  static WeightedTree from_json(const std::string& text);
};

WeightedTree chain_tree(std::size_t n, const std::vector<double>& g, const std::vector<double>& v);

// (Sf)(x) = v(x) * sum of g f over the root path of x.
std::vector<double> apply(const WeightedTree& wt, const std::vector<double>& f);

// sum_{depth j below x} v^q <= b 2^{-aj} v^q(x) for every vertex x and every j >= 0.
bool decay_check(const WeightedTree& wt, double a, double b);

enum class NormMethod { spectral, ascent, exhaustive };
NormMethod parse_norm_method(const std::string& s);
const char* norm_method_name(NormMethod m);

struct NormEstimate {
  NormMethod method = NormMethod::spectral;
  double value = 0.0;        // best value found
  double lower_bound = 0.0;  // ||Sf||_q / ||f||_p at a witness f
  bool exact = false;        // spectral, or p = 1 / q = inf closed forms
  std::vector<double> witness;
  int starts = 0;
};

struct NormOptions {
  int starts = 16;
  int max_iter = 20000;
  double tol = 1e-15;
  std::uint64_t seed = 12345;
};

NormEstimate operator_norm(const WeightedTree& wt, NormMethod method, const NormOptions& opt = {});

struct BoundReport {
  double norm_lb = 0.0;
  double bound = 0.0;  // sup g v
  double ratio = 0.0;
  double ceiling = 64.0;
  bool violated = false;
};

BoundReport bound_check(const WeightedTree& wt, double a, double b, double ceiling = 64.0,
                        const NormOptions& opt = {});

// Random tree on n vertices with g in [0,1] and v decaying so that the decay condition holds at (a, b = 1).
WeightedTree random_geometric_tree(std::size_t n, double a, double p, double q, std::mt19937_64& rng);

}  // namespace cusp
