#include "hierj/tree.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hierj/error.hpp"

namespace hierj {

bool Tree::contains(NodeId a, NodeId d) const noexcept {
  // A subtree occupies a contiguous post-order range ending at its root.
  const std::size_t span = 2 * leaves_below_[a] - 1;
  return post_pos_[d] <= post_pos_[a] && post_pos_[d] + span > post_pos_[a];
}

Tree build_tree(std::span<const std::int64_t> parents, std::size_t leaf_count) {
  if (leaf_count == 0 || parents.size() != 2 * leaf_count - 1) {
    throw Error(Errc::bad_length, "expected " + std::to_string(leaf_count == 0 ? 0 : 2 * leaf_count - 1) +
                                      " parent entries for " + std::to_string(leaf_count) + " leaves, got " +
                                      std::to_string(parents.size()));
  }
  if (parents.size() > std::numeric_limits<NodeId>::max() / 2) {
    throw Error(Errc::bad_length, "tree too large");
  }
  const std::size_t n = parents.size();

  Tree t;
  t.leaf_count_ = leaf_count;
  t.parent_.assign(n, kNoNode);
  t.children_.assign(n, {});
  std::vector<std::uint8_t> child_count(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t p = parents[i];
    if (p == -1) {
      if (t.root_ != kNoNode) {
        throw Error(Errc::multiple_roots, "nodes " + std::to_string(t.root_) + " and " + std::to_string(i) +
                                              " both have no parent");
      }
      t.root_ = static_cast<NodeId>(i);
      continue;
    }
    if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw Error(Errc::not_binary, "node " + std::to_string(i) + " names parent " + std::to_string(p) +
                                        ", which is not a node of the tree and cannot have two children");
    }
    if (static_cast<std::size_t>(p) == i) throw Error(Errc::cycle, "node " + std::to_string(i) + " is its own parent");
    if (static_cast<std::size_t>(p) < leaf_count) {
      throw Error(Errc::not_binary, "leaf " + std::to_string(p) + " has a child (" + std::to_string(i) + ")");
    }
    if (++child_count[p] > 2) throw Error(Errc::not_binary, "node " + std::to_string(p) + " has more than two children");
    auto& ch = t.children_[p];
    const auto id = static_cast<NodeId>(i);
    if (ch.left == kNoNode) {
      ch.left = id;
    } else {
      ch.right = std::max(ch.left, id);
      ch.left = std::min(ch.left, id);
    }
    t.parent_[i] = static_cast<NodeId>(p);
  }
  for (std::size_t i = leaf_count; i < n; ++i) {
    if (child_count[i] != 2) {
      throw Error(Errc::not_binary, "internal node " + std::to_string(i) + " has " + std::to_string(child_count[i]) +
                                        " children");
    }
  }
  if (t.root_ == kNoNode) throw Error(Errc::cycle, "no root: every node has a parent");

  // Iterative post-order from the root; nodes not reached lie on a cycle.
  t.post_order_.reserve(n);
  std::vector<std::pair<NodeId, bool>> stack{{t.root_, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (expanded || node < leaf_count) {
      t.post_order_.push_back(node);
      continue;
    }
    stack.push_back({node, true});
    stack.push_back({t.children_[node].right, false});
    stack.push_back({t.children_[node].left, false});
    if (stack.size() > n + 1) throw Error(Errc::cycle, "traversal does not terminate");
  }
  if (t.post_order_.size() != n) {
    throw Error(Errc::cycle, std::to_string(n - t.post_order_.size()) + " nodes are unreachable from the root");
  }

  t.post_pos_.assign(n, 0);
  t.leaves_below_.assign(n, 1);
  t.depth_.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const NodeId node = t.post_order_[pos];
    t.post_pos_[node] = static_cast<std::uint32_t>(pos);
    if (node >= leaf_count) {
      t.leaves_below_[node] = t.leaves_below_[t.children_[node].left] + t.leaves_below_[t.children_[node].right];
    }
  }
  for (auto it = t.post_order_.rbegin(); it != t.post_order_.rend(); ++it) {
    if (*it != t.root_) t.depth_[*it] = t.depth_[t.parent_[*it]] + 1;
  }
  return t;
}

void validate_leaf_map(const Tree& tree, const LabelMap& labels) {
  if (labels.labels.size() != labels.width * labels.height) {
    throw Error(Errc::shape_mismatch, "label map has " + std::to_string(labels.labels.size()) + " entries for a " +
                                          std::to_string(labels.width) + "x" + std::to_string(labels.height) +
                                          " image");
  }
  const auto areas = leaf_areas(tree, labels);
  for (std::size_t leaf = 0; leaf < areas.size(); ++leaf) {
    if (areas[leaf] == 0) throw Error(Errc::label_out_of_range, "leaf " + std::to_string(leaf) + " owns no pixel");
  }
}

std::vector<std::uint64_t> leaf_areas(const Tree& tree, const LabelMap& labels) {
  std::vector<std::uint64_t> areas(tree.leaf_count(), 0);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const auto leaf = labels.labels[i];
    if (leaf >= tree.leaf_count()) {
      throw Error(Errc::label_out_of_range, "pixel " + std::to_string(i) + " has label " + std::to_string(leaf) +
                                                " but the tree has " + std::to_string(tree.leaf_count()) + " leaves");
    }
    ++areas[leaf];
  }
  return areas;
}

namespace {

NodeDims propagate(const Tree& tree, NodeDims dims) {
  for (const NodeId node : tree.post_order()) {
    if (tree.is_leaf(node)) continue;
    const auto [l, r] = tree.children(node);
    dims.b[node] = dims.b[l] + dims.b[r];
    dims.f[node] = dims.f[l] + dims.f[r];
  }
  dims.background_total = dims.b[tree.root()];
  dims.foreground_total = dims.f[tree.root()];
  // Keeps every scaled benefit q*f - p*b below 2^63.
  constexpr std::int64_t kMaxPixels = std::numeric_limits<std::int32_t>::max();
  if (dims.background_total + dims.foreground_total > kMaxPixels) {
    throw Error(Errc::overflow, "more than 2^31-1 pixels");
  }
  return dims;
}

}  // namespace

NodeDims annotate_dims(const Tree& tree, const Mask& ground_truth, const LabelMap& labels) {
  if (ground_truth.width != labels.width || ground_truth.height != labels.height ||
      ground_truth.values.size() != labels.labels.size()) {
    throw Error(Errc::shape_mismatch, "mask is " + std::to_string(ground_truth.width) + "x" +
                                          std::to_string(ground_truth.height) + ", labels are " +
                                          std::to_string(labels.width) + "x" + std::to_string(labels.height));
  }
  NodeDims dims;
  dims.b.assign(tree.node_count(), 0);
  dims.f.assign(tree.node_count(), 0);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const auto leaf = labels.labels[i];
    if (leaf >= tree.leaf_count()) {
      throw Error(Errc::label_out_of_range, "pixel " + std::to_string(i) + " has label " + std::to_string(leaf));
    }
    if (ground_truth.values[i] != 0) {
      ++dims.f[leaf];
    } else {
      ++dims.b[leaf];
    }
  }
  return propagate(tree, std::move(dims));
}

NodeDims dims_from_leaves(const Tree& tree, std::span<const std::int64_t> leaf_b,
                          std::span<const std::int64_t> leaf_f) {
  if (leaf_b.size() != tree.leaf_count() || leaf_f.size() != tree.leaf_count()) {
    throw Error(Errc::shape_mismatch, "leaf dimension arrays do not match leaf count");
  }
  NodeDims dims;
  dims.b.assign(tree.node_count(), 0);
  dims.f.assign(tree.node_count(), 0);
  for (std::size_t i = 0; i < tree.leaf_count(); ++i) {
    if (leaf_b[i] < 0 || leaf_f[i] < 0) throw Error(Errc::shape_mismatch, "negative leaf dimension");
    dims.b[i] = leaf_b[i];
    dims.f[i] = leaf_f[i];
  }
  return propagate(tree, std::move(dims));
}

std::uint32_t LayerAssignment::layer_of(NodeId n) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), n,
                                   [](const auto& e, NodeId v) { return e.first < v; });
  if (it == entries.end() || it->first != n) {
    throw Error(Errc::inconsistent_selection, "node " + std::to_string(n) + " has no layer");
  }
  return it->second;
}

namespace {

std::vector<std::uint8_t> membership(const Tree& tree, std::span<const NodeId> nodes) {
  std::vector<std::uint8_t> selected(tree.node_count(), 0);
  for (const NodeId n : nodes) {
    if (n >= tree.node_count()) {
      throw Error(Errc::inconsistent_selection, "node " + std::to_string(n) + " is out of range");
    }
    selected[n] = 1;
  }
  return selected;
}

// Number of selected nodes on the path root..n, inclusive, for every node.
std::vector<std::uint32_t> selected_on_path(const Tree& tree, const std::vector<std::uint8_t>& selected) {
  std::vector<std::uint32_t> count(tree.node_count(), 0);
  const auto order = tree.post_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId n = *it;
    const std::uint32_t above = n == tree.root() ? 0 : count[tree.parent(n)];
    count[n] = above + selected[n];
  }
  return count;
}

}  // namespace

LayerAssignment layers(const Tree& tree, std::span<const NodeId> nodes) {
  const auto selected = membership(tree, nodes);
  LayerAssignment out;
  if (nodes.size() * 8 < tree.node_count()) {
    // Sparse selection: walk ancestor chains.
    for (const NodeId n : nodes) {
      std::uint32_t layer = 0;
      for (NodeId a = tree.parent(n); a != kNoNode; a = tree.parent(a)) layer += selected[a];
      out.entries.emplace_back(n, layer);
    }
  } else {
    const auto count = selected_on_path(tree, selected);
    for (const NodeId n : nodes) out.entries.emplace_back(n, count[n] - 1);
  }
  std::sort(out.entries.begin(), out.entries.end());
  out.entries.erase(std::unique(out.entries.begin(), out.entries.end()), out.entries.end());
  for (const auto& e : out.entries) out.max_layer = std::max(out.max_layer, e.second);
  return out;
}

bool is_cut(const Tree& tree, std::span<const NodeId> nodes) {
  const auto selected = membership(tree, nodes);
  std::size_t distinct = 0;
  for (auto s : selected) distinct += s;
  if (distinct != nodes.size()) return false;
  const auto count = selected_on_path(tree, selected);
  for (NodeId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    if (count[leaf] != 1) return false;
  }
  return true;
}

bool is_antichain(const Tree& tree, std::span<const NodeId> nodes) {
  const auto selected = membership(tree, nodes);
  std::size_t distinct = 0;
  for (auto s : selected) distinct += s;
  if (distinct != nodes.size()) return false;
  const auto count = selected_on_path(tree, selected);
  for (NodeId leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    if (count[leaf] > 1) return false;
  }
  return true;
}

std::vector<NodeId> coarsest_partition(const Tree& tree, std::span<const NodeId> target_leaves) {
  std::vector<std::uint8_t> full(tree.node_count(), 0);
  for (const NodeId leaf : target_leaves) {
    if (leaf >= tree.leaf_count()) {
      throw Error(Errc::label_out_of_range, "target element " + std::to_string(leaf) + " is not a leaf");
    }
    full[leaf] = 1;
  }
  if (target_leaves.empty()) throw Error(Errc::no_partition, "empty target has no partition into nodes");
  for (const NodeId n : tree.post_order()) {
    if (!tree.is_leaf(n)) full[n] = full[tree.children(n).left] && full[tree.children(n).right];
  }
  std::vector<NodeId> out;
  for (NodeId n = 0; n < tree.node_count(); ++n) {
    if (full[n] && (n == tree.root() || !full[tree.parent(n)])) out.push_back(n);
  }
  return out;
}

}  // namespace hierj
