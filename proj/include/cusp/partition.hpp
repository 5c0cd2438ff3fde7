#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "cusp/geometry.hpp"

namespace cusp {

enum class CellRole : std::uint8_t { interior, near_gamma, far_gamma };
const char* role_name(CellRole r);

using Index = std::array<std::uint64_t, kMaxDim - 1>;

struct Cell {
  int level = 0;
  Index idx{};          // integer corner per axis at resolution n_{k,i}
  std::int64_t parent = -1;
  CellRole role = CellRole::interior;
  double c_minus = 0.0;
  double c_plus = 0.0;
  double psi_inf = 0.0; // inf of psi over the base cell (as computed)
  double tail_top = 0.0; // sup of psi over the base for far cells with a tail
  bool has_tail = false;
};

using Resolutions = std::vector<std::array<int, kMaxDim - 1>>;

// n_{k,i} with 2^{-n} <= phi_i(2^{-k-3}) < 2^{-n+1}; the shifted rule uses 2^{-n+1} <= phi(2^{-k-4}) < 2^{-n+2}.
std::vector<int> level_resolutions(const std::vector<BoundaryModulus>& moduli, int k, bool shifted = false);
int dyadic_bracket(double value);

Cell make_root_cell(const DomainSpec& dom, bool pruned);
// Level-k child with integer corner idx; c- chains to the parent's c+.
Cell make_child_cell(const DomainSpec& dom, const Cell& parent, int k, const Index& idx,
                     const std::array<int, kMaxDim - 1>& n, bool pruned);
Box base_box_at(const DomainSpec& dom, const Index& idx, const std::array<int, kMaxDim - 1>& n);
Resolutions tree_resolutions(const DomainSpec& dom, int K, bool pruned);

struct TreeOptions {
  std::uint64_t max_cells = 30'000'000;
};

class PartitionTree {
 public:
  enum class Variant { full, hset_pruned };

  const DomainSpec& domain() const { return *domain_; }
  Variant variant() const { return variant_; }
  int max_level() const { return max_level_; }
  const Resolutions& resolutions() const { return res_; }
  const std::vector<Cell>& level(int k) const { return levels_[k]; }
  std::size_t size() const;
  // Children of cell j at level k, as indices into level k+1.
  std::vector<std::uint32_t> children(int k, std::size_t j) const;
  std::size_t child_count(int k, std::size_t j) const;

  Box base_box(const Cell& c) const;
  Box cell_box(const Cell& c) const;  // d-dimensional Delta_{k,j}
  double cell_volume(const Cell& c) const;
  // Index of the level-k cell whose base contains x' (half-open dyadic intervals).
  std::optional<std::size_t> find(int k, const Vec& xprime) const;

  struct Location {
    int level = -1;
    std::size_t index = 0;
    bool in_tail = false;
  };
  // Cell or tail containing x, if any.
  std::optional<Location> locate(const Vec& x) const;

  std::uint64_t near_count(int k) const;

 private:
  friend PartitionTree build_tree(std::shared_ptr<const DomainSpec>, int, const TreeOptions&);
  friend PartitionTree build_hset_tree(std::shared_ptr<const DomainSpec>, int, const TreeOptions&);
  friend class TreeBuilder;

  std::shared_ptr<const DomainSpec> domain_;
  Variant variant_ = Variant::full;
  int max_level_ = 0;
  Resolutions res_;
  std::vector<std::vector<Cell>> levels_;
  std::vector<std::vector<std::uint64_t>> keys_;          // sorted packed indices per level
  std::vector<std::vector<std::uint32_t>> child_start_;   // CSR into child_list_
  std::vector<std::vector<std::uint32_t>> child_list_;
};

PartitionTree build_tree(std::shared_ptr<const DomainSpec> dom, int K, const TreeOptions& opt = {});
PartitionTree build_hset_tree(std::shared_ptr<const DomainSpec> dom, int K, const TreeOptions& opt = {});

// Cells a tree would hold, level by level, without building it (pruned counts use the streaming J_{k,1} count).
std::vector<double> predicted_cell_counts(const DomainSpec& dom, int K, PartitionTree::Variant v);

struct NearCount {
  int level = 0;
  int n = 0;
  std::uint64_t count = 0;
  double scaled = 0.0;  // count * h(2^-n)
};
// #J_{k,1} for k = 0..K by direct dyadic search, no tree materialized.
std::vector<NearCount> near_cell_counts(const DomainSpec& dom, int K);

struct LevelAudit {
  int level = 0;
  std::size_t cells = 0;
  std::size_t near = 0;
  double height_min = 0.0;  // min (c+ - c-) 2^k
  double height_max = 0.0;
  double volume_ratio_min = 0.0;  // |Delta| / (2^-k prod phi_i(2^-k))
  double volume_ratio_max = 0.0;
  std::size_t branching_max = 0;  // children per parent at this level
};

struct AuditReport {
  std::vector<LevelAudit> levels;
  std::size_t root_branching = 0;
  std::size_t max_branching = 0;  // over parents at levels >= 1
  std::size_t branching_bound = 0;
  std::size_t tiling_violations = 0;
  std::size_t chaining_violations = 0;
  std::size_t height_violations = 0;  // heights outside [1/4, 3/4] 2^-k for k >= 1
  double overlap_measure = 0.0;
  double covered_measure = 0.0;
  double covering_defect = 0.0;
  double defect_bound = 0.0;  // 2^{-K-1} * base area
  double domain_measure = 0.0;
  double root_c_plus = 0.0;
};

AuditReport partition_audit(const PartitionTree& tree);

struct VolumeCheck {
  std::size_t samples = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double exact = 0.0;
  double z = 0.0;
  bool within_3se = false;
};
// Monte-Carlo estimate of the covered measure via point location.
VolumeCheck monte_carlo_volume(const PartitionTree& tree, std::size_t samples, std::uint64_t seed);
// Integral of psi over the base cube.
double domain_measure(const DomainSpec& dom);

void write_cells_csv(const PartitionTree& tree, std::ostream& out);

}  // namespace cusp
