#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hierj/consistency.hpp"
#include "hierj/tree.hpp"

namespace hierj {

/// Output of an auxiliary maximization of an additive attribute.
struct SolverResult {
  std::vector<NodeId> nodes;             // H, sorted
  std::vector<NodeId> positive_subset;   // G ⊆ H with A(N) > 0 (B and unlimited only)
  std::vector<std::uint32_t> layers;     // D only: layer of nodes[i] within H
  BenefitPair benefit;                   // recomputed from the extracted nodes
  std::size_t size_used = 0;             // |H|
  /// den(ω)·B^Root[i] for i = 1..t(Root); empty for the unlimited solver.
  std::vector<Wide> root_benefits;
};

enum class Extraction {
  /// Extract at the smallest size whose root benefit is maximal (best over sizes <= k).
  minimal_best,
  /// Extract at t(Root), the full budget.
  full_budget,
};

struct SolveOptions {
  Extraction extraction = Extraction::minimal_best;
  /// B only: skip nodes whose depth is >= k, shrinking t(N) to k - depth(N).
  bool depth_pruning = true;
};

/// Best cut with at most k nodes; the positive-attribute nodes form G.
SolverResult solve_b(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options = {});

/// Best family of at most k pairwise disjoint nodes (non-empty).
SolverResult solve_c(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options = {});

/// Best set of at most k possibly nested nodes scored with alternating signs
/// by nesting depth. The root may only be chosen on its own: subtracting
/// nodes from the root is the complement, which is optimized separately.
SolverResult solve_d(const Tree& tree, const Attribute& attribute, std::size_t k, SolveOptions options = {});

/// Minimal cut maximizing Σ max(A(N), 0) with no size limit, in O(|T|).
SolverResult solve_unlimited(const Tree& tree, const Attribute& attribute);

/// Dispatches on consistency.
SolverResult solve(Consistency consistency, const Tree& tree, const Attribute& attribute, std::size_t k,
                   SolveOptions options = {});

/// Smallest index k' (1-based) at which root_benefits is maximal.
std::size_t minimal_best(std::span<const Wide> root_benefits);

}  // namespace hierj
