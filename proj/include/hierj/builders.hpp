#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hierj/tree.hpp"

namespace hierj {

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint16_t> rgb;  // 3 samples per pixel, row-major
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
};

struct WeightedGraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
};

/// A tree together with the map from pixels to its leaves.
struct BuiltTree {
  Tree tree;
  LabelMap labels;
};

enum class BuildKind { geometric, l2_mst, external_weights };

struct BuildRecipe {
  BuildKind kind = BuildKind::geometric;
  std::uint64_t area_filter_threshold = 0;
};

/// Image-independent baseline: each rectangle is halved across its longer
/// side (across the width on ties); the first half takes the extra row or
/// column of an odd extent. Leaves are pixels.
BuiltTree geometric_tree(std::size_t width, std::size_t height);

/// 4-adjacency pixel graph weighted by the L2 distance of RGB vectors.
WeightedGraph pixel_graph(const RgbImage& image);

/// Region adjacency graph of a superpixel map. An edge's weight is the mean
/// L2 RGB difference over the 4-adjacent pixel pairs on the shared boundary.
WeightedGraph superpixel_graph(const RgbImage& image, const LabelMap& superpixels);

/// Single-linkage BPT from Kruskal's order: edges ascending by
/// (weight, min endpoint, max endpoint), every union creates the next node.
/// Throws DisconnectedGraph if the graph does not span all vertices.
Tree single_linkage_tree(const WeightedGraph& graph);

/// L2 gradient tree over pixels, or over superpixels when a map is given.
BuiltTree l2_mst_tree(const RgbImage& image, const LabelMap* superpixels = nullptr);

/// Same construction with caller-supplied edge weights.
Tree external_weight_tree(const WeightedGraph& graph);

/// Moves every merge whose smaller child covers fewer than `threshold`
/// pixels to the bottom of the hierarchy, ahead of all significant merges,
/// and rebuilds the BPT over the same leaves. Each merge is replayed between
/// the smallest leaves of its two sides. Threshold 0, or no small merge,
/// returns the input unchanged. Throws ThresholdTooLarge when threshold is at
/// least the total area.
Tree filter_small_areas(const Tree& tree, std::span<const std::uint64_t> leaf_areas, std::uint64_t threshold);

}  // namespace hierj
