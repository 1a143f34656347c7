#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hierj {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Immutable binary partition tree.
///
/// Nodes are dense indices 0..node_count()-1. Leaves occupy 0..leaf_count()-1,
/// every other node has exactly two children and node_count = 2*leaf_count - 1.
/// The root's parent is kNoNode. Construct through build_tree(), which
/// validates these invariants.
class Tree {
 public:
  struct Children {
    NodeId left = kNoNode;
    NodeId right = kNoNode;
  };

  std::size_t node_count() const noexcept { return parent_.size(); }
  std::size_t leaf_count() const noexcept { return leaf_count_; }
  NodeId root() const noexcept { return root_; }

  bool is_leaf(NodeId n) const noexcept { return n < leaf_count_; }
  NodeId parent(NodeId n) const noexcept { return parent_[n]; }
  const Children& children(NodeId n) const noexcept { return children_[n]; }

  std::span<const NodeId> parents() const noexcept { return parent_; }
  /// Every node appears after both of its children.
  std::span<const NodeId> post_order() const noexcept { return post_order_; }
  /// Number of leaves below n (1 for a leaf).
  std::size_t leaves_below(NodeId n) const noexcept { return leaves_below_[n]; }
  /// Distance from the root (root has depth 0).
  std::size_t depth(NodeId n) const noexcept { return depth_[n]; }

  /// True if a is an ancestor of d or a == d.
  bool contains(NodeId a, NodeId d) const noexcept;

 private:
  friend Tree build_tree(std::span<const std::int64_t> parents, std::size_t leaf_count);

  std::size_t leaf_count_ = 0;
  NodeId root_ = kNoNode;
  std::vector<NodeId> parent_;
  std::vector<Children> children_;
  std::vector<NodeId> post_order_;
  std::vector<std::uint32_t> leaves_below_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> post_pos_;
};

/// Validates a parent array (root written as -1) and builds the tree.
/// Throws Error with BadLength, NotBinary, MultipleRoots or Cycle.
Tree build_tree(std::span<const std::int64_t> parents, std::size_t leaf_count);

/// Per-pixel map from image position to leaf index, row-major.
struct LabelMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint32_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

/// Per-pixel binary mask, row-major; nonzero means foreground.
struct Mask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> values;
};

/// Checks that labels only use leaves of the tree and that every leaf owns at
/// least one pixel. Throws LabelOutOfRange otherwise.
void validate_leaf_map(const Tree& tree, const LabelMap& labels);

/// Pixel count of every leaf region.
std::vector<std::uint64_t> leaf_areas(const Tree& tree, const LabelMap& labels);

/// Ground-truth overlap counts per node: b = |N ∩ background|, f = |N ∩ foreground|.
struct NodeDims {
  std::vector<std::int64_t> b;
  std::vector<std::int64_t> f;
  std::int64_t background_total = 0;
  std::int64_t foreground_total = 0;
};

/// Counts pixels per leaf and propagates sums upward in O(|I| + |T|).
NodeDims annotate_dims(const Tree& tree, const Mask& ground_truth, const LabelMap& labels);

/// Builds dims from explicit per-leaf counts (b, f).
NodeDims dims_from_leaves(const Tree& tree, std::span<const std::int64_t> leaf_b,
                          std::span<const std::int64_t> leaf_f);

struct LayerAssignment {
  std::vector<std::pair<NodeId, std::uint32_t>> entries;  // sorted by node
  std::uint32_t max_layer = 0;

  std::uint32_t layer_of(NodeId n) const;
};

/// Layer of each node = number of selected nodes strictly containing it.
LayerAssignment layers(const Tree& tree, std::span<const NodeId> nodes);

/// True iff every root-to-leaf path crosses exactly one selected node.
bool is_cut(const Tree& tree, std::span<const NodeId> nodes);

/// True iff the selected nodes are pairwise disjoint (no nesting, no duplicates).
bool is_antichain(const Tree& tree, std::span<const NodeId> nodes);

/// Unique minimum-cardinality set of disjoint nodes whose leaves are exactly
/// `target_leaves`. Throws NoPartition for an empty target.
std::vector<NodeId> coarsest_partition(const Tree& tree, std::span<const NodeId> target_leaves);

}  // namespace hierj
