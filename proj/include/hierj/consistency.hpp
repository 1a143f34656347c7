#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hierj/rational.hpp"
#include "hierj/tree.hpp"

namespace hierj {

/// How a two-part segmentation is assembled from tree nodes.
///   B: the nodes form a cut; a subset of them is the foreground.
///   C: the nodes are disjoint; their union is the foreground.
///   D: nodes may nest; nodes at even nesting depth add, odd ones subtract.
enum class Consistency { B, C, D };

char consistency_letter(Consistency c) noexcept;
Consistency parse_consistency(std::string_view text);

/// Pixel counts of a segment inside ground-truth background and foreground.
struct SegmentDims {
  std::int64_t b = 0;
  std::int64_t f = 0;

  friend bool operator==(const SegmentDims&, const SegmentDims&) = default;
};

/// A node subset tagged with the rule that turns it into a segment.
struct NodeSelection {
  Consistency consistency = Consistency::C;
  std::vector<NodeId> nodes;            // sorted ascending
  std::vector<NodeId> foreground;       // B only: subset of nodes assigned to the segment
  std::vector<std::uint32_t> layers;    // D only: parallel to nodes
  SegmentDims dims;                     // dims of the segment X_s built from the nodes
  bool complemented = false;            // the scored segment is I \ X_s

  /// Dims of the scored segment given totals.
  SegmentDims scored_dims(std::int64_t background_total, std::int64_t foreground_total) const noexcept {
    if (!complemented) return dims;
    return {background_total - dims.b, foreground_total - dims.f};
  }
};

/// Signed running sums (Σ±f, Σ±b) of a node set; value at ω is f - ω·b.
struct BenefitPair {
  std::int64_t f = 0;
  std::int64_t b = 0;

  Rational at(const Rational& omega) const;
  friend bool operator==(const BenefitPair&, const BenefitPair&) = default;
};

/// Per-node additive attribute A(N) = f^N - ω·b^N held as an integer pair.
///
/// A negated attribute flips both components, which is how the complement
/// objective is posed to the same solvers.
class Attribute {
 public:
  Attribute(const NodeDims& dims, Rational omega, bool negated = false);

  const Rational& omega() const noexcept { return omega_; }
  bool negated() const noexcept { return negated_; }
  std::size_t size() const noexcept { return f_.size(); }

  std::int64_t f(NodeId n) const noexcept { return f_[n]; }
  std::int64_t b(NodeId n) const noexcept { return b_[n]; }
  /// den(ω)·A(N): exact, order-preserving integer image of A(N).
  Wide scaled(NodeId n) const noexcept {
    return static_cast<Wide>(omega_.den()) * f_[n] - static_cast<Wide>(omega_.num()) * b_[n];
  }
  Rational value(NodeId n) const { return BenefitPair{f_[n], b_[n]}.at(omega_); }

 private:
  std::vector<std::int64_t> f_;
  std::vector<std::int64_t> b_;
  Rational omega_;
  bool negated_;
};

/// Checks the selection's consistency invariants and fills in `layers` for D.
/// Throws InconsistentSelection.
void validate_selection(const Tree& tree, NodeSelection& selection);

/// Dims (b_s, f_s) of X_s: sum of the foreground nodes (B), of all nodes (C),
/// or the (-1)^layer signed sum (D).
SegmentDims segment_dims(const Tree& tree, const NodeSelection& selection, const NodeDims& dims);

/// Per-leaf membership in the scored segment (X_s, or its complement).
std::vector<std::uint8_t> realize_segmentation(const Tree& tree, const NodeSelection& selection);

/// f_s / (F + b_s). Throws EmptyGroundTruth when F == 0.
Rational jaccard(std::int64_t b_s, std::int64_t f_s, std::int64_t foreground_total, std::int64_t background_total);

/// (F - f_s) / (F + B - b_s). Throws EmptyGroundTruth when F == 0.
Rational jaccard_complement(std::int64_t b_s, std::int64_t f_s, std::int64_t foreground_total,
                            std::int64_t background_total);

/// Jaccard of the scored segment of a selection.
Rational score(const NodeSelection& selection, const NodeDims& dims);

/// Benefit pair of a node set under an attribute:
///   B: Σ A(N) over nodes with A(N) > 0 (nodes must form a cut),
///   C: Σ A(N) (nodes must be disjoint),
///   D: Σ (-1)^layer A(N).
BenefitPair benefit_pair(const Tree& tree, std::span<const NodeId> nodes, const Attribute& attribute,
                         Consistency consistency);

Rational benefit(const Tree& tree, std::span<const NodeId> nodes, const Attribute& attribute,
                 Consistency consistency);

}  // namespace hierj
