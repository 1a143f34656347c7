#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hierj/consistency.hpp"
#include "hierj/rational.hpp"
#include "hierj/tree.hpp"

namespace hierj {

/// Size guards for exhaustive search. Exceeding any of them throws
/// BudgetExceeded; enumeration never truncates silently.
struct EnumerationBudget {
  std::size_t max_leaves = 12;
  std::size_t max_k = 6;
  std::uint64_t max_candidates = 50'000'000;
};

enum class Objective { jaccard, complement, best_of_both };

/// Which d-consistent subsets the oracle visits. The solvers never subtract
/// from the root (that is the complement objective) and never put more nodes
/// in a subtree than it has leaves; solver_space applies both rules. The
/// excluded sets only add empty-segment representations, so best-of-both
/// values agree across the two spaces while single-objective values may not.
enum class DSpace { all_subsets, solver_space };

/// Streams every valid non-empty selection with at most k nodes, once each,
/// in a deterministic order:
///   B: every cut crossed with every foreground assignment (dims filled),
///   C: every antichain,
///   D: every subset, with layers.
void enumerate_selections(const Tree& tree, Consistency consistency, std::size_t k,
                          const std::function<void(const NodeSelection&)>& visit, EnumerationBudget budget = {},
                          DSpace d_space = DSpace::all_subsets);

struct OracleBest {
  Rational jaccard;
  NodeSelection selection;  // first maximizer in enumeration order
};

OracleBest brute_force_best(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k,
                            Objective objective = Objective::best_of_both, EnumerationBudget budget = {},
                            DSpace d_space = DSpace::all_subsets);

/// Best value for every k in 1..k_max from a single enumeration.
std::vector<Rational> brute_force_curve(const Tree& tree, const NodeDims& dims, Consistency consistency,
                                        std::size_t k_max, Objective objective = Objective::best_of_both,
                                        EnumerationBudget budget = {}, DSpace d_space = DSpace::all_subsets);

/// Exhaustive maximum of the consistency's benefit over non-empty selections
/// of at most k nodes, D searched in solver_space. Also reports the smallest
/// selection size reaching the maximum.
struct OracleBenefit {
  Rational value;
  std::size_t min_size = 0;
};
OracleBenefit brute_force_benefit(const Tree& tree, const Attribute& attribute, Consistency consistency,
                                  std::size_t k, EnumerationBudget budget = {});

/// SplitMix64: portable, seed-determined stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) noexcept { return lo + next() % (hi - lo + 1); }

 private:
  std::uint64_t state_;
};

/// Random BPT built by merging uniformly chosen pairs of components.
Tree random_tree(std::size_t leaf_count, Rng& rng);

/// Random leaf dims with F in 1..max_total and B in 0..max_total spread
/// uniformly over the leaves.
NodeDims random_dims(const Tree& tree, std::int64_t max_total, Rng& rng);

}  // namespace hierj
