#include "hierj/consistency.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>

#include "hierj/error.hpp"

namespace hierj {

char consistency_letter(Consistency c) noexcept {
  switch (c) {
    case Consistency::B: return 'b';
    case Consistency::C: return 'c';
    case Consistency::D: return 'd';
  }
  return '?';
}

Consistency parse_consistency(std::string_view text) {
  if (text == "b" || text == "B") return Consistency::B;
  if (text == "c" || text == "C") return Consistency::C;
  if (text == "d" || text == "D") return Consistency::D;
  throw Error(Errc::parse_error, "unknown consistency '" + std::string(text) + "'");
}

Rational BenefitPair::at(const Rational& omega) const {
  return Rational::from_wide(static_cast<Wide>(omega.den()) * f - static_cast<Wide>(omega.num()) * b, omega.den());
}

Attribute::Attribute(const NodeDims& dims, Rational omega, bool negated)
    : f_(dims.f), b_(dims.b), omega_(omega), negated_(negated) {
  if (negated_) {
    for (auto& v : f_) v = -v;
    for (auto& v : b_) v = -v;
  }
}

namespace {

[[noreturn]] void inconsistent(const std::string& what) { throw Error(Errc::inconsistent_selection, what); }

bool sorted_unique(const std::vector<NodeId>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](NodeId a, NodeId b) { return a >= b; }) == v.end();
}

}  // namespace

void validate_selection(const Tree& tree, NodeSelection& selection) {
  auto& nodes = selection.nodes;
  if (!selection.layers.empty()) {
    if (selection.layers.size() != nodes.size()) inconsistent("one layer index per node expected");
    std::vector<std::pair<NodeId, std::uint32_t>> paired;
    for (std::size_t i = 0; i < nodes.size(); ++i) paired.emplace_back(nodes[i], selection.layers[i]);
    std::sort(paired.begin(), paired.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) std::tie(nodes[i], selection.layers[i]) = paired[i];
  }
  std::sort(nodes.begin(), nodes.end());
  if (!sorted_unique(nodes)) inconsistent("duplicate node in selection");
  for (const NodeId n : nodes) {
    if (n >= tree.node_count()) inconsistent("node " + std::to_string(n) + " is out of range");
  }
  switch (selection.consistency) {
    case Consistency::B: {
      if (!is_cut(tree, nodes)) inconsistent("b-consistent selection is not a cut");
      std::sort(selection.foreground.begin(), selection.foreground.end());
      if (!sorted_unique(selection.foreground)) inconsistent("duplicate foreground node");
      if (!std::includes(nodes.begin(), nodes.end(), selection.foreground.begin(), selection.foreground.end())) {
        inconsistent("foreground assignment names a node outside the cut");
      }
      break;
    }
    case Consistency::C:
      if (!is_antichain(tree, nodes)) inconsistent("c-consistent selection has nested nodes");
      break;
    case Consistency::D: {
      const auto assignment = layers(tree, nodes);
      std::vector<std::uint32_t> computed;
      computed.reserve(nodes.size());
      for (const auto& e : assignment.entries) computed.push_back(e.second);
      if (!selection.layers.empty() && selection.layers != computed) {
        inconsistent("stated layer indices disagree with the nesting of the nodes");
      }
      selection.layers = std::move(computed);
      break;
    }
  }
}

SegmentDims segment_dims(const Tree& tree, const NodeSelection& selection, const NodeDims& dims) {
  NodeSelection checked = selection;
  validate_selection(tree, checked);
  SegmentDims out;
  switch (checked.consistency) {
    case Consistency::B:
      for (const NodeId n : checked.foreground) {
        out.b += dims.b[n];
        out.f += dims.f[n];
      }
      break;
    case Consistency::C:
      for (const NodeId n : checked.nodes) {
        out.b += dims.b[n];
        out.f += dims.f[n];
      }
      break;
    case Consistency::D:
      for (std::size_t i = 0; i < checked.nodes.size(); ++i) {
        const std::int64_t sign = checked.layers[i] % 2 == 0 ? 1 : -1;
        out.b += sign * dims.b[checked.nodes[i]];
        out.f += sign * dims.f[checked.nodes[i]];
      }
      break;
  }
  return out;
}

std::vector<std::uint8_t> realize_segmentation(const Tree& tree, const NodeSelection& selection) {
  NodeSelection checked = selection;
  validate_selection(tree, checked);
  const auto& marked = checked.consistency == Consistency::B ? checked.foreground : checked.nodes;
  std::vector<std::uint8_t> on(tree.node_count(), 0);
  for (const NodeId n : marked) on[n] = 1;

  // A leaf lies in X_s iff an odd number of marked nodes contain it: one for
  // B and C, and alternating add/subtract layers for D.
  std::vector<std::uint8_t> parity(tree.node_count(), 0);
  const auto order = tree.post_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId n = *it;
    const std::uint8_t above = n == tree.root() ? 0 : parity[tree.parent(n)];
    parity[n] = above ^ on[n];
  }
  std::vector<std::uint8_t> labeling(parity.begin(), parity.begin() + static_cast<std::ptrdiff_t>(tree.leaf_count()));
  if (checked.complemented) {
    for (auto& v : labeling) v ^= 1;
  }
  return labeling;
}

Rational jaccard(std::int64_t b_s, std::int64_t f_s, std::int64_t foreground_total, std::int64_t background_total) {
  if (foreground_total <= 0) throw Error(Errc::empty_ground_truth, "ground truth has no foreground pixel");
  if (f_s < 0 || f_s > foreground_total || b_s < 0 || b_s > background_total) {
    throw Error(Errc::inconsistent_selection, "segment dims (" + std::to_string(b_s) + ", " + std::to_string(f_s) +
                                                  ") outside the image");
  }
  return Rational(f_s, foreground_total + b_s);
}

Rational jaccard_complement(std::int64_t b_s, std::int64_t f_s, std::int64_t foreground_total,
                            std::int64_t background_total) {
  return jaccard(background_total - b_s, foreground_total - f_s, foreground_total, background_total);
}

Rational score(const NodeSelection& selection, const NodeDims& dims) {
  const auto d = selection.dims;
  return selection.complemented
             ? jaccard_complement(d.b, d.f, dims.foreground_total, dims.background_total)
             : jaccard(d.b, d.f, dims.foreground_total, dims.background_total);
}

BenefitPair benefit_pair(const Tree& tree, std::span<const NodeId> nodes, const Attribute& attribute,
                         Consistency consistency) {
  NodeSelection selection;
  selection.consistency = consistency;
  selection.nodes.assign(nodes.begin(), nodes.end());
  validate_selection(tree, selection);
  BenefitPair out;
  for (std::size_t i = 0; i < selection.nodes.size(); ++i) {
    const NodeId n = selection.nodes[i];
    std::int64_t sign = 1;
    if (consistency == Consistency::B && attribute.scaled(n) <= 0) continue;
    if (consistency == Consistency::D && selection.layers[i] % 2 == 1) sign = -1;
    out.f += sign * attribute.f(n);
    out.b += sign * attribute.b(n);
  }
  return out;
}

Rational benefit(const Tree& tree, std::span<const NodeId> nodes, const Attribute& attribute,
                 Consistency consistency) {
  return benefit_pair(tree, nodes, attribute, consistency).at(attribute.omega());
}

}  // namespace hierj
