#pragma once

#include <cstddef>
#include <vector>

#include "hierj/consistency.hpp"
#include "hierj/rational.hpp"
#include "hierj/tree.hpp"

namespace hierj {

struct OptimizationResult {
  Rational jaccard;
  NodeSelection selection;
  /// Number of auxiliary solver calls.
  std::size_t iterations = 0;
  /// ω passed to each solver call, in order. After the first entry the trace
  /// strictly increases; the first entry is the caller's starting ω.
  std::vector<Rational> omega_trace;
  bool complemented = false;
};

/// Exact maximum of f_s / (F + b_s) over selections of at most k nodes.
///
/// Alternates between maximizing the linear measure f_s - ω·b_s with the
/// consistency's auxiliary solver and resetting ω to the Jaccard index of
/// the maximizer, until ω stops increasing. A start ω0 above the optimum is
/// accepted: the first solve lowers ω below it.
OptimizationResult optimize_jaccard(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k,
                                    Rational omega0 = Rational(0));

/// Same for the complement segment, (F - f_s) / (F + B - b_s).
OptimizationResult optimize_jaccard_complement(const Tree& tree, const NodeDims& dims, Consistency consistency,
                                               std::size_t k, Rational omega0 = Rational(0));

/// Runs both and keeps the larger index; ties keep the non-complemented result.
OptimizationResult best_of_both(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k);

/// Unbounded-size optimum through the linear-time solver. The result is the
/// same for every consistency; the selection is b-consistent.
OptimizationResult optimize_jaccard_unlimited(const Tree& tree, const NodeDims& dims);

struct CurvePoint {
  std::size_t k = 0;
  OptimizationResult result;
};

/// Independent optimization for every k in 1..k_max.
std::vector<CurvePoint> curve(const Tree& tree, const NodeDims& dims, Consistency consistency, std::size_t k_max,
                              bool with_complement = true);

}  // namespace hierj
