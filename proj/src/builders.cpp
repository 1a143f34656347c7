#include "hierj/builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hierj/error.hpp"

namespace hierj {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns the surviving representative.
  std::size_t unite(std::size_t a, std::size_t b) {
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Replays merges (pairs of leaves) in order; each joins two components and
// creates the next internal node.
class MergeReplay {
 public:
  explicit MergeReplay(std::size_t leaves) : sets_(leaves), top_(leaves), parents_(2 * leaves - 1, -1) {
    std::iota(top_.begin(), top_.end(), 0);
    next_ = leaves;
  }

  bool merge(std::size_t a, std::size_t b) {
    a = sets_.find(a);
    b = sets_.find(b);
    if (a == b) return false;
    parents_[top_[a]] = static_cast<std::int64_t>(next_);
    parents_[top_[b]] = static_cast<std::int64_t>(next_);
    top_[sets_.unite(a, b)] = next_++;
    return true;
  }

  std::size_t merges() const { return next_ - top_.size(); }
  const std::vector<std::int64_t>& parents() const { return parents_; }

 private:
  DisjointSets sets_;
  std::vector<std::size_t> top_;
  std::vector<std::int64_t> parents_;
  std::size_t next_ = 0;
};

double rgb_distance(const RgbImage& image, std::size_t p, std::size_t q) {
  std::int64_t sum = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    const std::int64_t d = static_cast<std::int64_t>(image.rgb[3 * p + c]) - image.rgb[3 * q + c];
    sum += d * d;
  }
  return std::sqrt(static_cast<double>(sum));
}

void check_image(const RgbImage& image) {
  if (image.width == 0 || image.height == 0) throw Error(Errc::shape_mismatch, "empty image");
  if (image.rgb.size() != 3 * image.width * image.height) {
    throw Error(Errc::shape_mismatch, "RGB buffer does not match image extent");
  }
}

}  // namespace

BuiltTree geometric_tree(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw Error(Errc::shape_mismatch, "geometric tree needs a non-empty extent");
  const std::size_t leaves = width * height;
  std::vector<std::int64_t> parents(2 * leaves - 1, -1);
  std::size_t next = leaves;

  // Returns the node covering [x0, x0+w) x [y0, y0+h); internal ids in post-order.
  auto build = [&](auto&& self, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) -> std::size_t {
    if (w == 1 && h == 1) return y0 * width + x0;
    std::size_t first, second;
    if (w >= h) {
      const std::size_t wl = (w + 1) / 2;
      first = self(self, x0, y0, wl, h);
      second = self(self, x0 + wl, y0, w - wl, h);
    } else {
      const std::size_t ht = (h + 1) / 2;
      first = self(self, x0, y0, w, ht);
      second = self(self, x0, y0 + ht, w, h - ht);
    }
    const std::size_t node = next++;
    parents[first] = static_cast<std::int64_t>(node);
    parents[second] = static_cast<std::int64_t>(node);
    return node;
  };
  build(build, 0, 0, width, height);

  BuiltTree out{build_tree(parents, leaves), LabelMap{width, height, {}}};
  out.labels.labels.resize(leaves);
  std::iota(out.labels.labels.begin(), out.labels.labels.end(), 0u);
  return out;
}

WeightedGraph pixel_graph(const RgbImage& image) {
  check_image(image);
  WeightedGraph g;
  g.vertex_count = image.width * image.height;
  g.edges.reserve(2 * g.vertex_count);
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      const std::size_t p = y * image.width + x;
      if (x + 1 < image.width) g.edges.push_back({static_cast<NodeId>(p), static_cast<NodeId>(p + 1), rgb_distance(image, p, p + 1)});
      if (y + 1 < image.height) {
        g.edges.push_back({static_cast<NodeId>(p), static_cast<NodeId>(p + image.width),
                           rgb_distance(image, p, p + image.width)});
      }
    }
  }
  return g;
}

WeightedGraph superpixel_graph(const RgbImage& image, const LabelMap& superpixels) {
  check_image(image);
  if (superpixels.width != image.width || superpixels.height != image.height ||
      superpixels.labels.size() != image.width * image.height) {
    throw Error(Errc::shape_mismatch, "superpixel map does not match the image extent");
  }
  const auto max_label = *std::max_element(superpixels.labels.begin(), superpixels.labels.end());
  std::vector<std::uint8_t> used(static_cast<std::size_t>(max_label) + 1, 0);
  for (const auto l : superpixels.labels) used[l] = 1;
  for (std::size_t l = 0; l < used.size(); ++l) {
    if (!used[l]) throw Error(Errc::label_out_of_range, "superpixel labels are not contiguous: " + std::to_string(l) + " is unused");
  }

  struct Accumulator {
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::pair<NodeId, NodeId>, Accumulator> boundary;
  auto add = [&](std::size_t p, std::size_t q) {
    const NodeId a = superpixels.labels[p];
    const NodeId b = superpixels.labels[q];
    if (a == b) return;
    auto& acc = boundary[{std::min(a, b), std::max(a, b)}];
    acc.sum += rgb_distance(image, p, q);
    ++acc.count;
  };
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      const std::size_t p = y * image.width + x;
      if (x + 1 < image.width) add(p, p + 1);
      if (y + 1 < image.height) add(p, p + image.width);
    }
  }
  WeightedGraph g;
  g.vertex_count = used.size();
  for (const auto& [key, acc] : boundary) {
    g.edges.push_back({key.first, key.second, acc.sum / static_cast<double>(acc.count)});
  }
  return g;
}

Tree single_linkage_tree(const WeightedGraph& graph) {
  if (graph.vertex_count == 0) throw Error(Errc::disconnected_graph, "graph has no vertex");
  std::vector<Edge> edges = graph.edges;
  for (auto& e : edges) {
    if (e.u >= graph.vertex_count || e.v >= graph.vertex_count) {
      throw Error(Errc::label_out_of_range, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                                ") names a vertex beyond " + std::to_string(graph.vertex_count - 1));
    }
    if (!std::isfinite(e.weight) || e.weight < 0) {
      throw Error(Errc::parse_error, "edge weight must be finite and nonnegative");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  MergeReplay replay(graph.vertex_count);
  for (const auto& e : edges) {
    if (e.u != e.v) replay.merge(e.u, e.v);
    if (replay.merges() + 1 == graph.vertex_count) break;
  }
  if (replay.merges() + 1 != graph.vertex_count) {
    throw Error(Errc::disconnected_graph, std::to_string(graph.vertex_count - replay.merges()) +
                                              " components remain after all edges");
  }
  return build_tree(replay.parents(), graph.vertex_count);
}

BuiltTree l2_mst_tree(const RgbImage& image, const LabelMap* superpixels) {
  if (superpixels == nullptr) {
    LabelMap identity{image.width, image.height, std::vector<std::uint32_t>(image.width * image.height)};
    std::iota(identity.labels.begin(), identity.labels.end(), 0u);
    return {single_linkage_tree(pixel_graph(image)), std::move(identity)};
  }
  return {single_linkage_tree(superpixel_graph(image, *superpixels)), *superpixels};
}

Tree external_weight_tree(const WeightedGraph& graph) { return single_linkage_tree(graph); }

Tree filter_small_areas(const Tree& tree, std::span<const std::uint64_t> leaf_areas, std::uint64_t threshold) {
  if (leaf_areas.size() != tree.leaf_count()) throw Error(Errc::shape_mismatch, "one area per leaf expected");
  if (threshold == 0) return tree;

  std::vector<std::uint64_t> area(tree.node_count(), 0);
  std::vector<NodeId> representative(tree.node_count(), 0);
  for (const NodeId n : tree.post_order()) {
    if (tree.is_leaf(n)) {
      area[n] = leaf_areas[n];
      representative[n] = n;
    } else {
      const auto [l, r] = tree.children(n);
      area[n] = area[l] + area[r];
      representative[n] = std::min(representative[l], representative[r]);
    }
  }
  if (threshold >= area[tree.root()]) {
    throw Error(Errc::threshold_too_large, "threshold " + std::to_string(threshold) + " is not below the total area " +
                                               std::to_string(area[tree.root()]));
  }

  std::vector<NodeId> small, significant;
  for (const NodeId n : tree.post_order()) {
    if (tree.is_leaf(n)) continue;
    const auto [l, r] = tree.children(n);
    (std::min(area[l], area[r]) < threshold ? small : significant).push_back(n);
  }
  if (small.empty()) return tree;

  MergeReplay replay(tree.leaf_count());
  for (const auto* group : {&small, &significant}) {
    for (const NodeId n : *group) {
      const auto [l, r] = tree.children(n);
      replay.merge(representative[l], representative[r]);
    }
  }
  return build_tree(replay.parents(), tree.leaf_count());
}

}  // namespace hierj
